#pragma once

#include <random>

#include "qsd/chain.hpp"
#include "qsd/spectral.hpp"

namespace qsd::testing {

// Random strictly positive target distribution with bounded mass ratio.
inline ProbDist random_target(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    Vector p(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& x : p) {
        x = u(rng);
        sum += x;
    }
    for (double& x : p) x /= sum;
    return ProbDist::normalized(std::move(p));
}

// Metropolis chain on the complete graph targeting a random pi, made
// half-lazy. The laziness maps every eigenvalue q to (1+q)/2 > 0, so the
// spectrum is strictly positive, and for n >= 3 the second eigenvalue
// stays at least 1/4 (trace bound on the Metropolis spectrum).
inline ReversibleChain random_reversible_chain(int n, std::mt19937_64& rng) {
    const ProbDist pi = random_target(n, rng);
    Matrix p(n, n, 0.0);
    for (int x = 0; x < n; ++x) {
        double off = 0.0;
        for (int y = 0; y < n; ++y) {
            if (y == x) continue;
            const double accept = std::min(1.0, pi[y] / pi[x]);
            p(x, y) = 0.5 * accept / n;
            off += p(x, y);
        }
        p(x, x) = 1.0 - off;  // includes the 1/2 laziness
    }
    return reversible_chain(validate_kernel(std::move(p)));
}

inline ProbDist random_alpha(int n, std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    Vector p(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& x : p) {
        x = e(rng) + 1e-6;
        sum += x;
    }
    for (double& x : p) x /= sum;
    return ProbDist::normalized(std::move(p));
}

}  // namespace qsd::testing
