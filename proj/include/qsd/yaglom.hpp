#pragma once

#include <string>
#include <vector>

#include "qsd/conditioning.hpp"
#include "qsd/spectral.hpp"

namespace qsd {

// Relative threshold below which an eigen coordinate counts as zero:
// |a_i| > kCoefficientThreshold * ||a||_inf. Exact-zero tests are
// meaningless in floating point; the threshold is recorded in every report.
inline constexpr double kCoefficientThreshold = 1e-10;

struct DominantData {
    double lambda_alpha;         // eigenvalue of the dominant cluster
    std::vector<int> index_set;  // all eigen indices of that cluster (0-based, >= 1)
};

// Largest eigenvalue whose cluster carries a coordinate above threshold.
// The index set always spans the full cluster, members with a_i = 0
// included: their terms vanish and the result stays gauge independent.
DominantData dominant_data(const Coordinates& coords, const SpectralData& spec);

// ell = max_y sum_{i in I} -a_i v_i(y) / pi(y); strictly positive for any
// valid starting distribution.
double ell_alpha(const Coordinates& coords, const SpectralData& spec,
                 const std::vector<int>& index_set);

struct YaglomReport {
    double lambda_alpha = 0.0;
    std::vector<int> index_set;
    double ell_alpha = 0.0;
    ProbDist phi_star;
    int halting_state = -1;        // smallest index with phi_star = 0
    Vector dominant_vector;        // vbar with phi_star = pi + vbar
    bool used_simplified = false;  // singleton cluster: corollary form cross-checked
    double simplified_residual = 0.0;
    double phi_star_min_raw = 0.0;  // min entry before clamping
    double coefficient_threshold = kCoefficientThreshold;
    bool lazy_applied = false;
    double lazy_gamma = 0.0;
};

// The Yaglom limit phi_star = pi + (1/ell) sum_{i in I} a_i v_i.
YaglomReport yaglom_limit(const ProbDist& alpha, const SpectralData& spec);
YaglomReport yaglom_limit(const ProbDist& alpha, const ReversibleChain& chain,
                          const EigenOptions& options = {});

struct PropertyResiduals {
    double eigen_identity_max;  // phi P^t vs lambda^t phi + (1-lambda^t) pi, t in {1,5,25}
    double ratio_gap;           // |s_T/s_{T-1} - lambda| at the end of the profile
    double phi_star_min;        // min entry of phi_star
    double vbar_residual;       // || vbar P - lambda vbar ||_inf
};

// Residuals for the four structural properties of the limit. The profile
// must come from the same kernel the report refers to (the lazy kernel if
// the lazy fallback fired) and should be long, T >= 200 recommended.
PropertyResiduals verify_properties(const YaglomReport& report, const SpectralData& spec,
                                    const SeparationProfile& profile);

struct BasinMap {
    struct Row {
        double w1, w2, w3;
        int class_id;
        double lambda_alpha;
    };
    int resolution = 0;
    std::vector<Row> rows;                // barycentric scan order; pi skipped
    std::vector<ProbDist> class_phi;      // representative phi_star per class
    std::vector<int> class_sizes;
};

// Evaluates the Yaglom limit on the barycentric grid of step 1/resolution
// (3-state chains only) and fingerprints phi_star rounded to 6 decimals.
BasinMap classify_basins(const ReversibleChain& chain, int resolution);

struct AbsorbingQsd {
    double lambda_star = 0.0;   // Perron eigenvalue of the restricted kernel
    double escape_rate = 0.0;   // 1 - lambda_star, accumulated without cancellation
    ProbDist phi_star;          // principal left eigenvector, normalized
    int iterations = 0;
};

// Classical quasi-stationary distribution of a substochastic restricted
// matrix: phi [P] = lambda phi. Power iteration on the resolvent
// (I - [P])^{-1}; the shift at 1 keeps the iteration count small even when
// the Perron gap is exponentially narrow.
AbsorbingQsd absorbing_qsd(const Matrix& restricted);

}  // namespace qsd
