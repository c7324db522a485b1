#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsd/linalg.hpp"

namespace qsd {

// Point on the probability simplex. Entries are validated nonnegative
// (noise down to -1e-15 is clamped to zero) and the sum must be within
// 1e-12 of one. Construction paths differ in how the sum is polished:
//
//   normalized(p)      divide by the sum (user input, formulas)
//   from_validated(p)  keep the bits as computed (push-forwards, so that
//                      composing evolutions stays bit-identical)
//   clamped(p, tol)    clamp negative entries down to -tol, then normalize
//                      (conditional distributions that live on the boundary)
class ProbDist {
public:
    ProbDist() = default;  // empty placeholder, populated via the factories

    static ProbDist normalized(Vector p);
    static ProbDist from_validated(Vector p);
    static ProbDist clamped(Vector p, double neg_tol = 1e-12);

    static ProbDist dirac(int n, int state);
    static ProbDist uniform(int n);

    int size() const { return static_cast<int>(p_.size()); }
    double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }
    const Vector& values() const { return p_; }

    double min_entry() const;

private:
    explicit ProbDist(Vector p) : p_(std::move(p)) {}
    Vector p_;
};

// Validated row-stochastic matrix over a finite state space.
// Invariants (enforced by validate_kernel): rows sum to 1 within 1e-12,
// entries nonnegative after clamping noise >= -1e-15, the positive-entry
// digraph is strongly connected, and the gcd of cycle lengths is 1.
class TransitionKernel {
public:
    int size() const { return p_.rows(); }
    const Matrix& matrix() const { return p_; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool irreducible() const { return irreducible_; }
    bool aperiodic() const { return aperiodic_; }

    friend TransitionKernel validate_kernel(Matrix raw, std::vector<std::string> labels);

private:
    TransitionKernel(Matrix p, std::vector<std::string> labels)
        : p_(std::move(p)), labels_(std::move(labels)) {}
    Matrix p_;
    std::vector<std::string> labels_;
    bool irreducible_ = false;
    bool aperiodic_ = false;
};

TransitionKernel validate_kernel(Matrix raw, std::vector<std::string> labels = {});

// Unique stationary distribution of an irreducible aperiodic kernel.
// Dense least-squares solve of (P^T - I) with a normalization row appended;
// power iteration is the fallback if the solve leaves a residual above 1e-14.
ProbDist stationary_distribution(const TransitionKernel& kernel);

struct ReversibilityCheck {
    bool reversible;
    double max_violation;  // max |pi(x)P(x,y) - pi(y)P(y,x)|
    double threshold;      // 1e-10 * max flux entry
};
ReversibilityCheck check_reversibility(const TransitionKernel& kernel, const ProbDist& pi);

// (1-gamma) P + gamma I. Preserves pi and reversibility, maps each
// eigenvalue to (1-gamma) lambda + gamma. gamma in [0,1); gamma = 0 is the
// identity transform.
TransitionKernel lazy_transform(const TransitionKernel& kernel, double gamma);

// Exact t-step push-forward by iterated vector-matrix products, O(t n^2).
ProbDist evolve(const ProbDist& alpha, const TransitionKernel& kernel, long t);

// A kernel paired with its stationary distribution, verified to satisfy
// detailed balance. positive_spectrum is asserted by the spectral module.
struct ReversibleChain {
    TransitionKernel kernel;
    ProbDist pi;
    bool positive_spectrum = false;
};

// Builds a ReversibleChain, throwing NotReversible if detailed balance fails.
ReversibleChain reversible_chain(TransitionKernel kernel);

}  // namespace qsd
