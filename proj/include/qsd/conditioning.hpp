#pragma once

#include <optional>
#include <vector>

#include "qsd/chain.hpp"

namespace qsd {

// sep(mu, pi) = max_y (1 - mu(y)/pi(y)), clamped into [0,1].
double separation(const Vector& mu, const ProbDist& pi);
double separation(const ProbDist& mu, const ProbDist& pi);

struct SeparationProfile {
    ProbDist alpha;
    int horizon;  // s has entries s_0..s_horizon
    Vector s;
};

struct ConditionalTrajectory {
    std::vector<ProbDist> phi;  // phi_0..phi_horizon
    // Set when the run stops early: index of the last computed phi. Happens
    // only if the per-step separation ratio collapses below 1e-14 (the
    // conditional iterate is stationary to machine precision) or s_t
    // underflows; neither occurs for reversible positive-spectrum chains.
    std::optional<int> terminated_at;
};

struct TrajectoryResult {
    ConditionalTrajectory trajectory;
    SeparationProfile profile;
    std::vector<ProbDist> mu;  // exact push-forwards mu_0..mu_horizon
    ProbDist pi;
};

// The conditional-distribution sequence phi_t = (mu_t - pi)/s_t + pi for any
// ergodic kernel (reversibility not required; this is the iteration oracle).
//
// Each step advances phi by the one-step identity
//   phi_t = (nu - pi)/r + pi,  nu = phi_{t-1} P,  r = sep(nu, pi) = s_t/s_{t-1},
// which keeps every quantity O(1): the direct quotient (mu_t - pi)/s_t loses
// all precision once s_t falls below ~1e-13 while this form stays exact to
// rounding for arbitrary horizons. The s_t values are accumulated as the
// product of the per-step ratios; mu_t is carried alongside by exact
// push-forward so the profile remains recomputable from evolve.
TrajectoryResult conditional_trajectory(const ProbDist& alpha, const TransitionKernel& kernel,
                                        int horizon);
TrajectoryResult conditional_trajectory(const ProbDist& alpha, const TransitionKernel& kernel,
                                        int horizon, const ProbDist& pi);

struct GreedyDecomposition {
    double s_star;
    ProbDist phi_star;  // boundary point with mu = (1-s) pi + s phi
};

// Minimal s with mu = (1-s) pi + s phi; s_star equals sep(mu, pi) and
// phi_star sits on the simplex boundary.
GreedyDecomposition greedy_decomposition(const ProbDist& mu, const ProbDist& pi);

// Max over t of the sup-norm residual of
//   phi_t - [ (s_{t-1}/s_t) phi_{t-1} P + (1 - s_{t-1}/s_t) pi ].
// Ratios come from the stored s values, never re-derived from phi.
double verify_recursion(const ConditionalTrajectory& trajectory, const SeparationProfile& profile,
                        const TransitionKernel& kernel);

}  // namespace qsd
