#include "qsd/yaglom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "qsd/errors.hpp"

namespace qsd {

DominantData dominant_data(const Coordinates& coords, const SpectralData& spec) {
    // reconstructed deviation sum_i a_i v_i equals alpha - pi; when it sits at
    // rounding level every coordinate is noise and no dominant one exists
    const int n = spec.size();
    double deviation = 0.0;
    for (int y = 0; y < n; ++y) {
        double acc = 0.0;
        for (int i = 1; i < n; ++i)
            acc += coords.coefficient(i) * spec.left[static_cast<std::size_t>(i)][static_cast<std::size_t>(y)];
        deviation = std::max(deviation, std::abs(acc));
    }
    if (deviation < 1e-13)
        throw StationaryStart("alpha equals pi to working precision");

    const double amax = sup_norm(coords.a);
    const double threshold = kCoefficientThreshold * amax;
    int lead = -1;
    for (std::size_t k = 0; k < coords.a.size(); ++k) {
        if (std::abs(coords.a[k]) > threshold) {
            lead = static_cast<int>(k) + 1;  // eigen index
            break;
        }
    }
    if (lead < 0)
        throw StationaryStart("all eigen coordinates of alpha are below threshold; alpha = pi");

    std::vector<int> cluster = cluster_of(spec.eigenvalues, lead);
    cluster.erase(std::remove(cluster.begin(), cluster.end(), 0), cluster.end());
    return DominantData{spec.eigenvalues[static_cast<std::size_t>(cluster.front())], cluster};
}

double ell_alpha(const Coordinates& coords, const SpectralData& spec,
                 const std::vector<int>& index_set) {
    const int n = spec.size();
    double best = -1e300;
    for (int y = 0; y < n; ++y) {
        double acc = 0.0;
        for (int i : index_set)
            acc -= coords.coefficient(i) * spec.left[static_cast<std::size_t>(i)][static_cast<std::size_t>(y)];
        best = std::max(best, acc / spec.pi[y]);
    }
    if (!(best > 0.0)) {
        std::ostringstream msg;
        msg << "ell evaluated to " << best << "; dominant coordinates are inconsistent";
        throw NonPositiveEll(msg.str());
    }
    return best;
}

YaglomReport yaglom_limit(const ProbDist& alpha, const SpectralData& spec) {
    const int n = spec.size();
    const Coordinates coords = coordinates(alpha, spec);
    const DominantData dom = dominant_data(coords, spec);
    const double ell = ell_alpha(coords, spec, dom.index_set);

    Vector v(static_cast<std::size_t>(n), 0.0);
    for (int i : dom.index_set) {
        const double ai = coords.coefficient(i);
        const Vector& vi = spec.left[static_cast<std::size_t>(i)];
        for (int y = 0; y < n; ++y) v[y] += ai * vi[static_cast<std::size_t>(y)];
    }
    Vector vbar(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y) vbar[y] = v[static_cast<std::size_t>(y)] / ell;

    Vector phi_raw(static_cast<std::size_t>(n));
    double min_raw = 1e300;
    for (int y = 0; y < n; ++y) {
        phi_raw[y] = spec.pi[y] + vbar[static_cast<std::size_t>(y)];
        min_raw = std::min(min_raw, phi_raw[static_cast<std::size_t>(y)]);
    }
    if (min_raw < -1e-12) throw Error("yaglom limit came out negative; upstream inconsistency");

    // halting state: smallest maximizer of |vbar/pi| over the negative part
    int halting = -1;
    double peak = 0.0;
    for (int y = 0; y < n; ++y) {
        if (vbar[static_cast<std::size_t>(y)] < 0.0)
            peak = std::max(peak, std::abs(vbar[static_cast<std::size_t>(y)]) / spec.pi[y]);
    }
    for (int y = 0; y < n; ++y) {
        if (vbar[static_cast<std::size_t>(y)] < 0.0 &&
            std::abs(vbar[static_cast<std::size_t>(y)]) / spec.pi[y] >= peak * (1.0 - 1e-12)) {
            halting = y;
            break;
        }
    }
    if (halting < 0) throw Error("yaglom limit has no halting state; upstream inconsistency");

    YaglomReport report{
        dom.lambda_alpha, dom.index_set,  ell,  ProbDist::clamped(phi_raw),
        halting,          std::move(vbar), false, 0.0,
        min_raw,          kCoefficientThreshold,  spec.lazy_applied, spec.lazy_gamma};

    if (dom.index_set.size() == 1) {
        // corollary form for a simple dominant eigenvalue:
        //   phi = pi + v / max_{y: v(y)<0} |v(y)/pi(y)|
        const int i = dom.index_set.front();
        const double ai = coords.coefficient(i);
        const Vector& vi = spec.left[static_cast<std::size_t>(i)];
        double m = 0.0;
        for (int y = 0; y < n; ++y) {
            const double vy = ai * vi[static_cast<std::size_t>(y)];
            if (vy < 0.0) m = std::max(m, std::abs(vy) / spec.pi[y]);
        }
        double residual = 0.0;
        for (int y = 0; y < n; ++y) {
            const double simplified = spec.pi[y] + ai * vi[static_cast<std::size_t>(y)] / m;
            residual = std::max(residual, std::abs(simplified - phi_raw[static_cast<std::size_t>(y)]));
        }
        report.used_simplified = true;
        report.simplified_residual = residual;
    }
    return report;
}

YaglomReport yaglom_limit(const ProbDist& alpha, const ReversibleChain& chain,
                          const EigenOptions& options) {
    return yaglom_limit(alpha, eigendecompose(chain, options));
}

PropertyResiduals verify_properties(const YaglomReport& report, const SpectralData& spec,
                                    const SeparationProfile& profile) {
    const Matrix& p = spec.kernel.matrix();
    const int n = spec.size();
    const double lambda = report.lambda_alpha;

    double eigen_identity = 0.0;
    Vector x = report.phi_star.values();
    double lt = 1.0;
    for (int t = 1; t <= 25; ++t) {
        x = left_apply(x, p);
        lt *= lambda;
        if (t == 1 || t == 5 || t == 25) {
            for (int y = 0; y < n; ++y) {
                const double target = lt * report.phi_star[y] + (1.0 - lt) * spec.pi[y];
                eigen_identity = std::max(eigen_identity, std::abs(x[static_cast<std::size_t>(y)] - target));
            }
        }
    }

    double ratio_gap = std::numeric_limits<double>::quiet_NaN();
    const std::size_t len = profile.s.size();
    if (len >= 2 && profile.s[len - 2] > 0.0)
        ratio_gap = std::abs(profile.s[len - 1] / profile.s[len - 2] - lambda);

    const Vector vbar_p = left_apply(report.dominant_vector, p);
    double vbar_residual = 0.0;
    for (int y = 0; y < n; ++y)
        vbar_residual = std::max(vbar_residual,
                                 std::abs(vbar_p[static_cast<std::size_t>(y)] -
                                          lambda * report.dominant_vector[static_cast<std::size_t>(y)]));

    return PropertyResiduals{eigen_identity, ratio_gap, report.phi_star.min_entry(), vbar_residual};
}

namespace {

std::string fingerprint(const ProbDist& phi) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f", phi[0], phi[1], phi[2]);
    return buf;
}

}  // namespace

BasinMap classify_basins(const ReversibleChain& chain, int resolution) {
    if (chain.kernel.size() != 3)
        throw UnsupportedDimension("basin classification is defined for 3-state chains only");
    if (resolution < 10) throw ParamOutOfRange("basin resolution must be at least 10");

    const SpectralData spec = eigendecompose(chain);
    BasinMap map;
    map.resolution = resolution;
    std::map<std::string, int> classes;

    for (int i = 0; i <= resolution; ++i) {
        for (int j = 0; j <= resolution - i; ++j) {
            const int k = resolution - i - j;
            const double r = resolution;
            const ProbDist probe = ProbDist::normalized({i / r, j / r, k / r});
            YaglomReport report;
            try {
                report = yaglom_limit(probe, spec);
            } catch (const StationaryStart&) {
                continue;  // the grid point is pi itself
            }
            const std::string key = fingerprint(report.phi_star);
            auto [it, inserted] = classes.emplace(key, static_cast<int>(map.class_phi.size()));
            if (inserted) {
                map.class_phi.push_back(report.phi_star);
                map.class_sizes.push_back(0);
            }
            ++map.class_sizes[static_cast<std::size_t>(it->second)];
            map.rows.push_back(BasinMap::Row{i / r, j / r, k / r, it->second, report.lambda_alpha});
        }
    }
    return map;
}

AbsorbingQsd absorbing_qsd(const Matrix& restricted) {
    if (restricted.rows() != restricted.cols())
        throw ValidationError("restricted matrix must be square");
    const int n = restricted.rows();
    if (n < 1) throw ValidationError("restricted matrix must be nonempty");

    Matrix m = restricted;
    bool some_escape = false;
    Vector escape(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            double x = m(i, j);
            if (x < 0.0) {
                if (x < -1e-15) throw NegativeEntry("restricted matrix has a negative entry");
                x = 0.0;
                m(i, j) = 0.0;
            }
            sum += x;
        }
        if (sum > 1.0 + 1e-12) throw RowSumError("restricted matrix row exceeds 1");
        escape[static_cast<std::size_t>(i)] = std::max(0.0, 1.0 - sum);
        if (sum < 1.0 - 1e-12) some_escape = true;
    }
    if (!some_escape) throw ValidationError("restricted matrix is stochastic; no absorption");
    if (n > 1) {
        // strong connectivity of the positive-entry digraph
        auto reach = [&](bool reversed) {
            std::vector<int> seen(static_cast<std::size_t>(n), 0);
            std::vector<int> stack{0};
            seen[0] = 1;
            while (!stack.empty()) {
                const int u = stack.back();
                stack.pop_back();
                for (int v = 0; v < n; ++v)
                    if ((reversed ? m(v, u) : m(u, v)) > 0.0 && !seen[v]) {
                        seen[v] = 1;
                        stack.push_back(v);
                    }
            }
            return seen;
        };
        const auto fwd = reach(false);
        const auto bwd = reach(true);
        for (int i = 0; i < n; ++i)
            if (!fwd[i] || !bwd[i]) throw NotIrreducible("restricted matrix is not irreducible");
    }

    // left Perron vector via the resolvent: x <- x (I - M)^{-1}, i.e. solve
    // (I - M)^T y = x each step
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - m(j, i);
    const LuFactors lu = lu_factor(std::move(a));

    Vector x(static_cast<std::size_t>(n), 1.0 / n);
    double lambda = 0.0;
    int iterations = 0;
    bool converged = false;
    for (long iter = 1; iter <= 1000000; ++iter) {
        Vector y = lu_solve(lu, x);
        const double total = std::accumulate(y.begin(), y.end(), 0.0);
        for (double& v : y) v /= total;
        const Vector z = left_apply(y, m);
        lambda = std::accumulate(z.begin(), z.end(), 0.0);
        double residual = 0.0;
        for (int i = 0; i < n; ++i)
            residual = std::max(residual, std::abs(z[static_cast<std::size_t>(i)] -
                                                   lambda * y[static_cast<std::size_t>(i)]));
        x = std::move(y);
        iterations = static_cast<int>(iter);
        if (residual <= 1e-14) {
            converged = true;
            break;
        }
    }
    if (!converged) throw ConvergenceFailure("absorbing qsd power iteration did not reach 1e-14");

    // escape rate as a positive sum: no cancellation even when lambda ~ 1
    double rate = 0.0;
    for (int i = 0; i < n; ++i) rate += x[static_cast<std::size_t>(i)] * escape[static_cast<std::size_t>(i)];

    for (double v : x)
        if (!(v > 0.0)) throw ConvergenceFailure("absorbing qsd is not strictly positive");
    return AbsorbingQsd{lambda, rate, ProbDist::from_validated(std::move(x)), iterations};
}

}  // namespace qsd
