#include "qsd/conditioning.hpp"

#include <algorithm>
#include <cmath>

#include "qsd/errors.hpp"

namespace qsd {

namespace {

constexpr double kStationaryTol = 1e-14;
constexpr double kUnderflowFloor = 1e-300;

Vector conditional_step(const Vector& nu, const ProbDist& pi, double r) {
    const int n = pi.size();
    Vector phi(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y) phi[y] = (nu[y] - pi[y]) / r + pi[y];
    return phi;
}

}  // namespace

double separation(const Vector& mu, const ProbDist& pi) {
    double s = 0.0;
    for (int y = 0; y < pi.size(); ++y) s = std::max(s, 1.0 - mu[static_cast<std::size_t>(y)] / pi[y]);
    return std::min(s, 1.0);
}

double separation(const ProbDist& mu, const ProbDist& pi) {
    return separation(mu.values(), pi);
}

TrajectoryResult conditional_trajectory(const ProbDist& alpha, const TransitionKernel& kernel,
                                        int horizon) {
    return conditional_trajectory(alpha, kernel, horizon, stationary_distribution(kernel));
}

TrajectoryResult conditional_trajectory(const ProbDist& alpha, const TransitionKernel& kernel,
                                        int horizon, const ProbDist& pi) {
    if (alpha.size() != kernel.size()) throw ValidationError("trajectory: dimension mismatch");
    if (horizon < 0) throw ParamOutOfRange("trajectory: horizon must be nonnegative");

    const double s0 = separation(alpha, pi);
    if (s0 < kStationaryTol) throw AlreadyStationary("starting distribution already equals pi");

    TrajectoryResult result{ConditionalTrajectory{}, SeparationProfile{alpha, 0, {}}, {}, pi};
    result.profile.s.reserve(static_cast<std::size_t>(horizon) + 1);
    result.trajectory.phi.reserve(static_cast<std::size_t>(horizon) + 1);
    result.mu.reserve(static_cast<std::size_t>(horizon) + 1);

    result.profile.s.push_back(s0);
    result.trajectory.phi.push_back(ProbDist::clamped(conditional_step(alpha.values(), pi, s0)));
    result.mu.push_back(alpha);

    Vector mu_raw = alpha.values();
    for (int t = 1; t <= horizon; ++t) {
        const Vector nu = left_apply(result.trajectory.phi.back().values(), kernel.matrix());
        const double r = separation(nu, pi);
        const double next_s = result.profile.s.back() * r;
        if (r < kStationaryTol || next_s < kUnderflowFloor) {
            result.trajectory.terminated_at = t - 1;
            break;
        }
        mu_raw = left_apply(mu_raw, kernel.matrix());
        result.mu.push_back(ProbDist::from_validated(mu_raw));
        result.profile.s.push_back(next_s);
        result.trajectory.phi.push_back(ProbDist::clamped(conditional_step(nu, pi, r)));
    }
    result.profile.horizon = static_cast<int>(result.profile.s.size()) - 1;
    return result;
}

GreedyDecomposition greedy_decomposition(const ProbDist& mu, const ProbDist& pi) {
    const double s = separation(mu, pi);
    if (s < kStationaryTol) throw AlreadyStationary("mu coincides with pi");
    return GreedyDecomposition{s, ProbDist::clamped(conditional_step(mu.values(), pi, s))};
}

double verify_recursion(const ConditionalTrajectory& trajectory, const SeparationProfile& profile,
                        const TransitionKernel& kernel) {
    const ProbDist pi = stationary_distribution(kernel);
    const int last = static_cast<int>(trajectory.phi.size()) - 1;
    double worst = 0.0;
    for (int t = 1; t <= last; ++t) {
        const double st = profile.s[static_cast<std::size_t>(t)];
        if (st <= 0.0) continue;
        const double ratio = profile.s[static_cast<std::size_t>(t - 1)] / st;
        const Vector nu = left_apply(trajectory.phi[static_cast<std::size_t>(t - 1)].values(),
                                     kernel.matrix());
        const Vector& phi = trajectory.phi[static_cast<std::size_t>(t)].values();
        for (int y = 0; y < pi.size(); ++y) {
            const double predicted = ratio * nu[static_cast<std::size_t>(y)] + (1.0 - ratio) * pi[y];
            worst = std::max(worst, std::abs(phi[static_cast<std::size_t>(y)] - predicted));
        }
    }
    return worst;
}

}  // namespace qsd
