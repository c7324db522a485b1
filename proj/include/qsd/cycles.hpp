#pragma once

#include <vector>

#include "qsd/conditioning.hpp"

namespace qsd {

enum class CycleStatus { Converged, Periodic, Undetermined };

struct CycleReport {
    CycleStatus status = CycleStatus::Undetermined;
    int period = 0;  // valid when status != Undetermined (Converged means 1)
    std::vector<ProbDist> representatives;
    int burn_in = 0;
    double max_dev = 0.0;  // worst || phi_{t+p} - phi_t ||_inf inside the window
};

// Detects the smallest period p <= max_period with
// || phi_{t+p} - phi_t ||_inf <= tol for all t in [burn_in, burn_in + max_period].
// Operates purely on the trajectory, so it is valid for non-reversible
// kernels where the Yaglom limit can fail to exist. Undetermined is a
// first-class outcome.
CycleReport detect_cycle(const ConditionalTrajectory& trajectory, int burn_in = 50,
                         int max_period = 24, double tol = 1e-8);

}  // namespace qsd
