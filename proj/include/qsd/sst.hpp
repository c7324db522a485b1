#pragma once

#include <vector>

#include "qsd/conditioning.hpp"

namespace qsd {

// Law of the optimal strong stationary time: P(tau > t) = s_t, so
// pmf(0) = 1 - s_0 and pmf(t) = s_{t-1} - s_t. Mass beyond the horizon is
// reported as tail = s_T, never extrapolated.
struct SstProfile {
    Vector pmf;              // t = 0..T
    double tail;             // s_T
    Vector survival_ratios;  // r_t = s_{t+1}/s_t, t = 0..T-1 (0 once s_t hits 0)
};

SstProfile sst_profile(const SeparationProfile& profile);

// The killed pure-birth chain intertwined with P: state t jumps to t+1 with
// probability 1 - k_t or dies, and the link row Lambda(t, .) is phi_t with
// Lambda(dagger, .) = pi. Initial law: mass s_0 at 0, the rest at dagger.
struct BirthChain {
    int horizon;
    Vector kill;                      // k_t = 1 - s_{t+1}/s_t, t = 0..T-1
    std::vector<ProbDist> link_rows;  // phi_0..phi_T
    ProbDist link_dagger;             // pi
    double alpha_hat_mass0;           // s_0
};

BirthChain build_birth_chain(const ConditionalTrajectory& trajectory,
                             const SeparationProfile& profile, const ProbDist& pi);

// Max over rows t <= T-1 of || Lambda(t,.) P - [(1-k_t) Lambda(t+1,.) + k_t pi] ||_inf.
// The truncated final row has no successor and is excluded.
double intertwining_residual(const BirthChain& birth_chain, const TransitionKernel& kernel);

}  // namespace qsd
