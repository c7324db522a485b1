#include "qsd/sst.hpp"

#include <algorithm>
#include <cmath>

#include "qsd/errors.hpp"

namespace qsd {

SstProfile sst_profile(const SeparationProfile& profile) {
    const std::size_t len = profile.s.size();
    if (len == 0) throw ValidationError("sst: empty separation profile");

    SstProfile out;
    out.pmf.resize(len);
    out.pmf[0] = std::max(0.0, 1.0 - profile.s[0]);
    for (std::size_t t = 1; t < len; ++t) {
        double mass = profile.s[t - 1] - profile.s[t];
        if (mass < 0.0) {
            if (mass < -1e-14) throw Error("sst: separation profile is not monotone");
            mass = 0.0;
        }
        out.pmf[t] = mass;
    }
    out.tail = profile.s[len - 1];
    out.survival_ratios.resize(len - 1);
    for (std::size_t t = 0; t + 1 < len; ++t)
        out.survival_ratios[t] = profile.s[t] > 0.0 ? profile.s[t + 1] / profile.s[t] : 0.0;
    return out;
}

BirthChain build_birth_chain(const ConditionalTrajectory& trajectory,
                             const SeparationProfile& profile, const ProbDist& pi) {
    if (trajectory.phi.size() != profile.s.size())
        throw ValidationError("birth chain: trajectory and profile lengths differ");
    const int horizon = profile.horizon;

    Vector kill(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
        const double st = profile.s[static_cast<std::size_t>(t)];
        // absorption is certain once the survival probability hits zero
        kill[static_cast<std::size_t>(t)] =
            st > 0.0 ? 1.0 - profile.s[static_cast<std::size_t>(t + 1)] / st : 1.0;
    }
    return BirthChain{horizon, std::move(kill), trajectory.phi, pi, profile.s[0]};
}

double intertwining_residual(const BirthChain& birth_chain, const TransitionKernel& kernel) {
    const ProbDist& pi = birth_chain.link_dagger;
    double worst = 0.0;
    for (int t = 0; t + 1 <= birth_chain.horizon; ++t) {
        const Vector lhs = left_apply(birth_chain.link_rows[static_cast<std::size_t>(t)].values(),
                                      kernel.matrix());
        const double k = birth_chain.kill[static_cast<std::size_t>(t)];
        const ProbDist& next = birth_chain.link_rows[static_cast<std::size_t>(t + 1)];
        for (int y = 0; y < pi.size(); ++y) {
            const double rhs = (1.0 - k) * next[y] + k * pi[y];
            worst = std::max(worst, std::abs(lhs[static_cast<std::size_t>(y)] - rhs));
        }
    }
    return worst;
}

}  // namespace qsd
