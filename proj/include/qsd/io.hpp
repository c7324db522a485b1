#pragma once

#include <string>

#include <json.hpp>

#include "qsd/cycles.hpp"
#include "qsd/sst.hpp"
#include "qsd/spectral.hpp"
#include "qsd/yaglom.hpp"

namespace qsd {

using nlohmann::json;

// Kernel schema: {"n": int, "P": [[float;n];n], "labels": [string;n]?}
json kernel_to_json(const TransitionKernel& kernel);
TransitionKernel kernel_from_json(const json& j);
TransitionKernel load_kernel(const std::string& path);

// Distribution schema: a bare JSON array of floats.
json dist_to_json(const ProbDist& dist);
ProbDist dist_from_json(const json& j);

// Alpha specification: "uniform", "dirac:K", or a path to a distribution file.
ProbDist parse_alpha_spec(const std::string& spec, int n);

json spectral_to_json(const SpectralData& spec);
json yaglom_to_json(const YaglomReport& report);
json sst_to_json(const SstProfile& profile);
json cycle_to_json(const CycleReport& report);
json trajectory_to_json(const TrajectoryResult& result);

// CSV exports, 17 significant digits per float.
std::string trajectory_csv(const TrajectoryResult& result);
std::string sst_csv(const SstProfile& profile, const Vector& survival);
std::string basins_csv(const BasinMap& map);

// Short type name of a library error, for machine-readable failure reports.
std::string error_name(const std::exception& e);

}  // namespace qsd
