#include "qsd/cycles.hpp"

#include <algorithm>
#include <sstream>

#include "qsd/errors.hpp"

namespace qsd {

CycleReport detect_cycle(const ConditionalTrajectory& trajectory, int burn_in, int max_period,
                         double tol) {
    if (burn_in < 0 || max_period < 1 || tol <= 0.0)
        throw ParamOutOfRange("detect_cycle: bad burn_in/max_period/tol");
    const int last = static_cast<int>(trajectory.phi.size()) - 1;
    if (last < burn_in + 2 * max_period) {
        std::ostringstream msg;
        msg << "trajectory reaches t = " << last << " but cycle detection needs t = "
            << burn_in + 2 * max_period;
        throw WindowTooShort(msg.str());
    }

    for (int p = 1; p <= max_period; ++p) {
        double dev = 0.0;
        for (int t = burn_in; t <= burn_in + max_period; ++t) {
            dev = std::max(dev, sup_diff(trajectory.phi[static_cast<std::size_t>(t + p)].values(),
                                         trajectory.phi[static_cast<std::size_t>(t)].values()));
            if (dev > tol) break;
        }
        if (dev <= tol) {
            CycleReport report;
            report.status = p == 1 ? CycleStatus::Converged : CycleStatus::Periodic;
            report.period = p;
            report.burn_in = burn_in;
            report.max_dev = dev;
            for (int t = burn_in; t < burn_in + p; ++t)
                report.representatives.push_back(trajectory.phi[static_cast<std::size_t>(t)]);
            return report;
        }
    }
    CycleReport report;
    report.status = CycleStatus::Undetermined;
    report.burn_in = burn_in;
    return report;
}

}  // namespace qsd
