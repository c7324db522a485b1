#include "qsd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qsd/errors.hpp"

namespace qsd {

namespace {

constexpr double kClusterTol = 1e-9;
constexpr double kPositiveTol = 1e-12;

bool same_cluster(double li, double lj) {
    return std::abs(li - lj) <= kClusterTol * std::max(1.0, std::abs(li));
}

}  // namespace

std::vector<std::vector<int>> eigen_clusters(const Vector& eigenvalues) {
    std::vector<std::vector<int>> clusters;
    const int n = static_cast<int>(eigenvalues.size());
    int start = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n || !same_cluster(eigenvalues[i - 1], eigenvalues[i])) {
            std::vector<int> run(static_cast<std::size_t>(i - start));
            std::iota(run.begin(), run.end(), start);
            clusters.push_back(std::move(run));
            start = i;
        }
    }
    return clusters;
}

std::vector<int> cluster_of(const Vector& eigenvalues, int i) {
    int lo = i;
    while (lo > 0 && same_cluster(eigenvalues[lo - 1], eigenvalues[lo])) --lo;
    int hi = i;
    const int n = static_cast<int>(eigenvalues.size());
    while (hi + 1 < n && same_cluster(eigenvalues[hi], eigenvalues[hi + 1])) ++hi;
    std::vector<int> run(static_cast<std::size_t>(hi - lo + 1));
    std::iota(run.begin(), run.end(), lo);
    return run;
}

namespace {

// S = D^{1/2} P D^{-1/2}; detailed balance makes it symmetric up to the
// reversibility tolerance, so average the residual away before handing it
// to the symmetric solver.
Matrix symmetrized(const ReversibleChain& chain, const Vector& sqrt_pi) {
    const int n = chain.kernel.size();
    const Matrix& p = chain.kernel.matrix();
    Matrix s(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) s(x, y) = sqrt_pi[x] * p(x, y) / sqrt_pi[y];
    for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
            const double avg = 0.5 * (s(x, y) + s(y, x));
            s(x, y) = avg;
            s(y, x) = avg;
        }
    }
    return s;
}

}  // namespace

Vector reversible_spectrum(const ReversibleChain& chain) {
    const int n = chain.kernel.size();
    Vector sqrt_pi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) sqrt_pi[i] = std::sqrt(chain.pi[i]);
    Vector values = jacobi_symmetric(symmetrized(chain, sqrt_pi)).values;
    std::sort(values.begin(), values.end(), std::greater<>());
    if (std::abs(values[0] - 1.0) > 1e-10)
        throw EigensolverFailure("principal eigenvalue deviates from 1");
    values[0] = 1.0;
    return values;
}

SpectralData eigendecompose(const ReversibleChain& chain, const EigenOptions& options) {
    const int n = chain.kernel.size();
    const ProbDist& pi = chain.pi;

    Vector sqrt_pi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) sqrt_pi[i] = std::sqrt(pi[i]);

    const JacobiResult jac = jacobi_symmetric(symmetrized(chain, sqrt_pi));

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return jac.values[a] > jac.values[b]; });

    Vector eigenvalues(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eigenvalues[i] = jac.values[order[i]];

    if (std::abs(eigenvalues[0] - 1.0) > 1e-10)
        throw EigensolverFailure("principal eigenvalue deviates from 1");
    eigenvalues[0] = 1.0;
    if (n > 1 && eigenvalues[1] > 1.0 - 1e-13)
        throw EigensolverFailure("non-principal eigenvalue numerically reaches 1");
    for (int i = 1; i < n; ++i) {
        if (std::abs(eigenvalues[i]) > 1.0 - 1e-13)
            throw EigensolverFailure("eigenvalue modulus numerically reaches 1");
    }

    if (eigenvalues[static_cast<std::size_t>(n - 1)] <= kPositiveTol) {
        if (!options.lazy_fallback) {
            std::ostringstream msg;
            msg << "spectrum not strictly positive (min eigenvalue "
                << eigenvalues[static_cast<std::size_t>(n - 1)]
                << "); rerun with the lazy fallback to shift it";
            throw NonPositiveSpectrum(msg.str());
        }
        ReversibleChain lazy{lazy_transform(chain.kernel, options.gamma), chain.pi, false};
        SpectralData data = eigendecompose(lazy, EigenOptions{false, options.gamma});
        data.lazy_applied = true;
        data.lazy_gamma = options.gamma;
        return data;
    }

    std::vector<Vector> right(static_cast<std::size_t>(n), Vector(static_cast<std::size_t>(n)));
    std::vector<Vector> left(static_cast<std::size_t>(n), Vector(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        Vector& f = right[static_cast<std::size_t>(i)];
        for (int x = 0; x < n; ++x) f[x] = jac.vectors(x, order[i]) / sqrt_pi[x];
        if (i > 0) {
            // the principal direction is known exactly; deflating it removes
            // the solver's 1-vs-lambda_2 mixing, which otherwise grows like
            // off_norm / (1 - lambda_2) and can dwarf the gauge tolerance
            double mean = 0.0;
            for (int x = 0; x < n; ++x) mean += pi[x] * f[x];
            double norm2 = 0.0;
            for (int x = 0; x < n; ++x) {
                f[x] -= mean;
                norm2 += pi[x] * f[x] * f[x];
            }
            const double scale = 1.0 / std::sqrt(norm2);
            for (int x = 0; x < n; ++x) f[x] *= scale;
        }
        // sign gauge: first entry that is nonzero beyond solver noise decides
        double sup = 0.0;
        for (int x = 0; x < n; ++x) sup = std::max(sup, std::abs(f[x]));
        const double noise = 1e-6 * sup;
        for (int x = 0; x < n; ++x) {
            if (std::abs(f[x]) > noise) {
                if (f[x] < 0.0)
                    for (int y = 0; y < n; ++y) f[y] = -f[y];
                break;
            }
        }
        Vector& v = left[static_cast<std::size_t>(i)];
        for (int x = 0; x < n; ++x) v[x] = pi[x] * f[x];
    }

    // snap the principal pair to its exact form
    std::fill(right[0].begin(), right[0].end(), 1.0);
    left[0] = pi.values();

    // biorthonormality is structural in this gauge; verify it anyway
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double g = dot(left[static_cast<std::size_t>(i)], right[static_cast<std::size_t>(j)]);
            if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-10)
                throw EigensolverFailure("biorthonormality check failed");
        }
    }

    return SpectralData{std::move(eigenvalues), std::move(left), std::move(right),
                        pi, chain.kernel, false, 0.0};
}

Coordinates coordinates(const ProbDist& alpha, const SpectralData& spec) {
    if (alpha.size() != spec.size()) throw ValidationError("coordinates: dimension mismatch");
    const int n = spec.size();
    Vector a(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) a[i - 1] = dot(alpha.values(), spec.right[static_cast<std::size_t>(i)]);
    return Coordinates{std::move(a)};
}

}  // namespace qsd
