#include "qsd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsd/errors.hpp"

namespace qsd {

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json vec_to_json(const Vector& v) {
    return json(v);
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("matrix JSON must be a nonempty array of rows");
    const int n = static_cast<int>(j.size());
    Matrix m(n, static_cast<int>(j.at(0).size()));
    for (int i = 0; i < n; ++i) {
        const json& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<int>(row.size()) != m.cols())
            throw ValidationError("matrix JSON rows have inconsistent lengths");
        for (int k = 0; k < m.cols(); ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
}

}  // namespace

json kernel_to_json(const TransitionKernel& kernel) {
    json j;
    j["n"] = kernel.size();
    j["P"] = matrix_to_json(kernel.matrix());
    if (!kernel.labels().empty()) j["labels"] = kernel.labels();
    return j;
}

TransitionKernel kernel_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("P")) throw ValidationError("kernel JSON needs fields n and P");
    Matrix m = matrix_from_json(j.at("P"));
    if (j.at("n").get<int>() != m.rows()) throw ValidationError("kernel JSON: n does not match P");
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return validate_kernel(std::move(m), std::move(labels));
}

TransitionKernel load_kernel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open kernel file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("kernel file is not valid JSON: ") + e.what());
    }
    return kernel_from_json(j);
}

json dist_to_json(const ProbDist& dist) {
    return vec_to_json(dist.values());
}

ProbDist dist_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("distribution JSON must be an array");
    return ProbDist::normalized(j.get<Vector>());
}

ProbDist parse_alpha_spec(const std::string& spec, int n) {
    if (spec == "uniform") return ProbDist::uniform(n);
    if (spec.rfind("dirac:", 0) == 0) {
        int state = -1;
        try {
            state = std::stoi(spec.substr(6));
        } catch (...) {
            throw ValidationError("bad dirac spec: " + spec);
        }
        return ProbDist::dirac(n, state);
    }
    std::ifstream in(spec);
    if (!in) throw ValidationError("cannot open alpha file: " + spec);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("alpha file is not valid JSON: ") + e.what());
    }
    ProbDist alpha = dist_from_json(j);
    if (alpha.size() != n) throw ValidationError("alpha length does not match the kernel");
    return alpha;
}

json spectral_to_json(const SpectralData& spec) {
    json j;
    j["gauge"] = "pi-weighted-unit";
    j["eigenvalues"] = vec_to_json(spec.eigenvalues);
    json left = json::array();
    json right = json::array();
    for (const Vector& v : spec.left) left.push_back(vec_to_json(v));
    for (const Vector& f : spec.right) right.push_back(vec_to_json(f));
    j["left"] = std::move(left);
    j["right"] = std::move(right);
    j["pi"] = vec_to_json(spec.pi.values());
    if (spec.lazy_applied) {
        j["lazy"] = {{"applied", true}, {"gamma", spec.lazy_gamma}};
    }
    return j;
}

json yaglom_to_json(const YaglomReport& report) {
    json j;
    j["lambda_alpha"] = report.lambda_alpha;
    j["index_set"] = report.index_set;
    j["ell_alpha"] = report.ell_alpha;
    j["phi_star"] = dist_to_json(report.phi_star);
    j["halting_state"] = report.halting_state;
    j["dominant_vector"] = vec_to_json(report.dominant_vector);
    j["used_simplified"] = report.used_simplified;
    j["coefficient_threshold"] = report.coefficient_threshold;
    j["residuals"] = {{"simplified_vs_general", report.simplified_residual},
                      {"phi_star_min_raw", report.phi_star_min_raw}};
    if (report.lazy_applied) {
        j["lazy"] = {{"applied", true}, {"gamma", report.lazy_gamma}};
    }
    return j;
}

json sst_to_json(const SstProfile& profile) {
    json j;
    j["pmf"] = vec_to_json(profile.pmf);
    j["tail"] = profile.tail;
    j["survival_ratios"] = vec_to_json(profile.survival_ratios);
    return j;
}

json cycle_to_json(const CycleReport& report) {
    json j;
    switch (report.status) {
        case CycleStatus::Converged: j["status"] = "Converged"; break;
        case CycleStatus::Periodic: j["status"] = "Periodic"; break;
        case CycleStatus::Undetermined: j["status"] = "Undetermined"; break;
    }
    j["period"] = report.period;
    json reps = json::array();
    for (const ProbDist& phi : report.representatives) reps.push_back(dist_to_json(phi));
    j["representatives"] = std::move(reps);
    j["burn_in"] = report.burn_in;
    j["max_dev"] = report.max_dev;
    return j;
}

json trajectory_to_json(const TrajectoryResult& result) {
    json j;
    j["s"] = vec_to_json(result.profile.s);
    json mu = json::array();
    for (const ProbDist& m : result.mu) mu.push_back(dist_to_json(m));
    json phi = json::array();
    for (const ProbDist& f : result.trajectory.phi) phi.push_back(dist_to_json(f));
    j["mu"] = std::move(mu);
    j["phi"] = std::move(phi);
    if (result.trajectory.terminated_at)
        j["terminated_at"] = *result.trajectory.terminated_at;
    else
        j["terminated_at"] = nullptr;
    return j;
}

std::string trajectory_csv(const TrajectoryResult& result) {
    const int n = result.pi.size();
    std::ostringstream out;
    out << "t,s_t";
    for (int i = 1; i <= n; ++i) out << ",mu_" << i;
    for (int i = 1; i <= n; ++i) out << ",phi_" << i;
    out << "\n";
    for (std::size_t t = 0; t < result.profile.s.size(); ++t) {
        out << t << "," << g17(result.profile.s[t]);
        for (int y = 0; y < n; ++y) out << "," << g17(result.mu[t][y]);
        for (int y = 0; y < n; ++y) out << "," << g17(result.trajectory.phi[t][y]);
        out << "\n";
    }
    return out.str();
}

std::string sst_csv(const SstProfile& profile, const Vector& survival) {
    std::ostringstream out;
    out << "t,pmf,survival,kill_prob\n";
    for (std::size_t t = 0; t < profile.pmf.size(); ++t) {
        out << t << "," << g17(profile.pmf[t]) << "," << g17(survival[t]);
        if (t < profile.survival_ratios.size())
            out << "," << g17(1.0 - profile.survival_ratios[t]);
        else
            out << ",";
        out << "\n";
    }
    return out.str();
}

std::string basins_csv(const BasinMap& map) {
    std::ostringstream out;
    out << "w1,w2,w3,class_id,lambda_alpha\n";
    for (const BasinMap::Row& row : map.rows) {
        out << g17(row.w1) << "," << g17(row.w2) << "," << g17(row.w3) << "," << row.class_id
            << "," << g17(row.lambda_alpha) << "\n";
    }
    return out.str();
}

std::string error_name(const std::exception& e) {
    if (dynamic_cast<const RowSumError*>(&e)) return "RowSumError";
    if (dynamic_cast<const NegativeEntry*>(&e)) return "NegativeEntry";
    if (dynamic_cast<const NotIrreducible*>(&e)) return "NotIrreducible";
    if (dynamic_cast<const NotAperiodic*>(&e)) return "NotAperiodic";
    if (dynamic_cast<const ParamOutOfRange*>(&e)) return "ParamOutOfRange";
    if (dynamic_cast<const UnsupportedDimension*>(&e)) return "UnsupportedDimension";
    if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
    if (dynamic_cast<const NotReversible*>(&e)) return "NotReversible";
    if (dynamic_cast<const NonPositiveSpectrum*>(&e)) return "NonPositiveSpectrum";
    if (dynamic_cast<const EigensolverFailure*>(&e)) return "EigensolverFailure";
    if (dynamic_cast<const ConvergenceFailure*>(&e)) return "ConvergenceFailure";
    if (dynamic_cast<const NonPositiveEll*>(&e)) return "NonPositiveEll";
    if (dynamic_cast<const WindowTooShort*>(&e)) return "WindowTooShort";
    if (dynamic_cast<const StationaryStart*>(&e)) return "StationaryStart";
    if (dynamic_cast<const AlreadyStationary*>(&e)) return "AlreadyStationary";
    if (dynamic_cast<const PreconditionError*>(&e)) return "PreconditionError";
    if (dynamic_cast<const DegenerateStart*>(&e)) return "DegenerateStart";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    return "InternalError";
}

}  // namespace qsd
