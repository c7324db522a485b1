#include "qsd/chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "qsd/errors.hpp"

namespace qsd {

namespace {

constexpr double kEntryClamp = -1e-15;
constexpr double kRowSumTol = 1e-12;
constexpr double kDistSumTol = 1e-12;

void check_entries(Vector& p) {
    for (double& x : p) {
        if (x < 0.0) {
            if (x < kEntryClamp) {
                std::ostringstream msg;
                msg << "negative entry " << x << " below clamp threshold " << kEntryClamp;
                throw NegativeEntry(msg.str());
            }
            x = 0.0;
        }
    }
}

double checked_sum(const Vector& p) {
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(sum - 1.0) > kDistSumTol) {
        std::ostringstream msg;
        msg << "distribution sums to " << sum << ", outside 1 +/- " << kDistSumTol;
        throw ValidationError(msg.str());
    }
    return sum;
}

}  // namespace

ProbDist ProbDist::normalized(Vector p) {
    check_entries(p);
    const double sum = checked_sum(p);
    for (double& x : p) x /= sum;
    return ProbDist(std::move(p));
}

ProbDist ProbDist::from_validated(Vector p) {
    check_entries(p);
    checked_sum(p);
    return ProbDist(std::move(p));
}

ProbDist ProbDist::clamped(Vector p, double neg_tol) {
    for (double& x : p) {
        if (x < 0.0) {
            if (x < -neg_tol) {
                std::ostringstream msg;
                msg << "entry " << x << " below -" << neg_tol << "; upstream computation is inconsistent";
                throw Error(msg.str());
            }
            x = 0.0;
        }
    }
    const double sum = checked_sum(p);
    for (double& x : p) x /= sum;
    return ProbDist(std::move(p));
}

ProbDist ProbDist::dirac(int n, int state) {
    if (state < 0 || state >= n) throw ParamOutOfRange("dirac state index out of range");
    Vector p(static_cast<std::size_t>(n), 0.0);
    p[static_cast<std::size_t>(state)] = 1.0;
    return ProbDist(std::move(p));
}

ProbDist ProbDist::uniform(int n) {
    Vector p(static_cast<std::size_t>(n), 1.0 / n);
    return ProbDist(std::move(p));
}

double ProbDist::min_entry() const {
    return *std::min_element(p_.begin(), p_.end());
}

namespace {

std::vector<int> reachable(const Matrix& p, bool reversed) {
    const int n = p.rows();
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v = 0; v < n; ++v) {
            const double w = reversed ? p(v, u) : p(u, v);
            if (w > 0.0 && !seen[v]) {
                seen[v] = 1;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

// Period of a strongly connected digraph: gcd of d(u)+1-d(v) over edges,
// with d the BFS levels from state 0. Equals the gcd of cycle lengths
// through state 0.
int digraph_period(const Matrix& p) {
    const int n = p.rows();
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::deque<int> queue{0};
    dist[0] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v = 0; v < n; ++v) {
            if (p(u, v) > 0.0 && dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    long g = 0;
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (p(u, v) <= 0.0) continue;
            const long diff = dist[u] + 1 - dist[v];
            g = std::gcd(g, std::abs(diff));
        }
    }
    return static_cast<int>(g);
}

}  // namespace

TransitionKernel validate_kernel(Matrix raw, std::vector<std::string> labels) {
    if (raw.rows() != raw.cols()) throw ValidationError("kernel matrix must be square");
    const int n = raw.rows();
    if (n < 2) throw ValidationError("kernel needs at least 2 states");
    if (!labels.empty() && static_cast<int>(labels.size()) != n)
        throw ValidationError("labels length must match state count");

    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            double x = raw(i, j);
            if (x < 0.0) {
                if (x < kEntryClamp) {
                    std::ostringstream msg;
                    msg << "entry (" << i << "," << j << ") = " << x << " is negative";
                    throw NegativeEntry(msg.str());
                }
                x = 0.0;
                raw(i, j) = 0.0;
            }
            sum += x;
        }
        if (std::abs(sum - 1.0) > kRowSumTol) {
            std::ostringstream msg;
            msg << "row " << i << " sums to " << sum << ", outside 1 +/- " << kRowSumTol;
            throw RowSumError(msg.str());
        }
    }

    const std::vector<int> fwd = reachable(raw, false);
    const std::vector<int> bwd = reachable(raw, true);
    for (int i = 0; i < n; ++i) {
        if (!fwd[i] || !bwd[i]) {
            std::ostringstream msg;
            msg << "state " << i << " not on a closed communicating path with state 0";
            throw NotIrreducible(msg.str());
        }
    }

    const int period = digraph_period(raw);
    if (period != 1) {
        std::ostringstream msg;
        msg << "chain has period " << period;
        throw NotAperiodic(msg.str());
    }

    TransitionKernel kernel(std::move(raw), std::move(labels));
    kernel.irreducible_ = true;
    kernel.aperiodic_ = true;
    return kernel;
}

namespace {

double stationary_residual(const Vector& x, const Matrix& p) {
    const Vector xp = left_apply(x, p);
    return sup_diff(xp, x);
}

}  // namespace

ProbDist stationary_distribution(const TransitionKernel& kernel) {
    const Matrix& p = kernel.matrix();
    const int n = kernel.size();

    // Rows 0..n-1: (P^T - I), row n: normalization sum = 1.
    Matrix a(n + 1, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < n; ++j) a(n, j) = 1.0;
    Vector b(static_cast<std::size_t>(n + 1), 0.0);
    b[static_cast<std::size_t>(n)] = 1.0;

    Vector x = lstsq(a, b);
    double total = std::accumulate(x.begin(), x.end(), 0.0);
    for (double& v : x) v /= total;

    bool ok = stationary_residual(x, p) <= 1e-14;
    for (double v : x)
        if (v <= 0.0) ok = false;

    if (!ok) {
        // power-iteration fallback for ill-conditioned solves
        Vector y(static_cast<std::size_t>(n), 1.0 / n);
        for (long iter = 0; iter < 1000000; ++iter) {
            Vector z = left_apply(y, p);
            const double s = std::accumulate(z.begin(), z.end(), 0.0);
            for (double& v : z) v /= s;
            const double change = sup_diff(z, y);
            y = std::move(z);
            if (change < 1e-16) break;
        }
        bool positive = true;
        for (double v : y)
            if (v <= 0.0) positive = false;
        if (!positive || stationary_residual(y, p) > 1e-14)
            throw ConvergenceFailure("stationary distribution: residual above 1e-14");
        x = std::move(y);
    }
    return ProbDist::from_validated(std::move(x));
}

ReversibilityCheck check_reversibility(const TransitionKernel& kernel, const ProbDist& pi) {
    const Matrix& p = kernel.matrix();
    const int n = kernel.size();
    double max_flux = 0.0;
    double max_violation = 0.0;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            const double fxy = pi[x] * p(x, y);
            max_flux = std::max(max_flux, fxy);
            if (y > x) {
                const double fyx = pi[y] * p(y, x);
                max_violation = std::max(max_violation, std::abs(fxy - fyx));
            }
        }
    }
    const double threshold = 1e-10 * max_flux;
    return {max_violation <= threshold, max_violation, threshold};
}

TransitionKernel lazy_transform(const TransitionKernel& kernel, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ParamOutOfRange("lazy gamma must lie in [0,1)");
    const int n = kernel.size();
    Matrix q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            q(i, j) = (1.0 - gamma) * kernel.matrix()(i, j) + (i == j ? gamma : 0.0);
    return validate_kernel(std::move(q), kernel.labels());
}

ProbDist evolve(const ProbDist& alpha, const TransitionKernel& kernel, long t) {
    if (alpha.size() != kernel.size()) throw ValidationError("evolve: dimension mismatch");
    if (t < 0) throw ParamOutOfRange("evolve: t must be nonnegative");
    if (t == 0) return alpha;
    Vector mu = alpha.values();
    for (long step = 0; step < t; ++step) mu = left_apply(mu, kernel.matrix());
    const double sum = std::accumulate(mu.begin(), mu.end(), 0.0);
    if (std::abs(sum - 1.0) > kDistSumTol) return ProbDist::normalized(std::move(mu));
    return ProbDist::from_validated(std::move(mu));
}

ReversibleChain reversible_chain(TransitionKernel kernel) {
    ProbDist pi = stationary_distribution(kernel);
    const ReversibilityCheck check = check_reversibility(kernel, pi);
    if (!check.reversible) {
        std::ostringstream msg;
        msg << "kernel is not reversible: max detailed-balance violation " << check.max_violation
            << " exceeds " << check.threshold;
        throw NotReversible(msg.str());
    }
    return ReversibleChain{std::move(kernel), std::move(pi), false};
}

}  // namespace qsd
