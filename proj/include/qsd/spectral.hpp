#pragma once

#include <vector>

#include "qsd/chain.hpp"
#include "qsd/linalg.hpp"

namespace qsd {

struct EigenOptions {
    // When the spectrum is not strictly positive, fall back to the lazy
    // kernel (1-gamma)P + gamma I instead of throwing NonPositiveSpectrum.
    bool lazy_fallback = false;
    double gamma = 0.5;
};

// Eigendecomposition of a reversible kernel in the pi-weighted gauge:
//   sum_x pi(x) f_i(x)^2 = 1,   v_i(x) = pi(x) f_i(x),
// with the sign fixed so the first nonzero entry of f_i is positive.
// This makes <v_i, f_j> = delta_ij automatically. Index 0 is the principal
// pair (eigenvalue 1, v_0 = pi, f_0 = all ones); eigenvalues are sorted
// descending with stable tie order.
struct SpectralData {
    Vector eigenvalues;
    std::vector<Vector> left;   // rows v_i
    std::vector<Vector> right;  // columns f_i
    ProbDist pi;
    TransitionKernel kernel;  // the kernel that was decomposed (lazy if applied)
    bool lazy_applied = false;
    double lazy_gamma = 0.0;

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

SpectralData eigendecompose(const ReversibleChain& chain, const EigenOptions& options = {});

// Eigenvalues only, sorted descending. Symmetric eigenvalues are perfectly
// conditioned, so this works even when near-degenerate pairs make the full
// eigenvector gauge unresolvable (eigendecompose throws in that case).
Vector reversible_spectrum(const ReversibleChain& chain);

// Coordinates of alpha in the eigenbasis: a[k] = <alpha, f_{k+1}> for
// k = 0..n-2 (the principal coordinate is identically 1 and not stored),
// so that alpha = pi + sum_k a[k] v_{k+1}.
struct Coordinates {
    Vector a;
    double coefficient(int eigen_index) const { return a[static_cast<std::size_t>(eigen_index - 1)]; }
};

Coordinates coordinates(const ProbDist& alpha, const SpectralData& spec);

// Partition of eigen indices into clusters of numerically equal eigenvalues:
// adjacent values belong together iff |l_i - l_j| <= 1e-9 * max(1, |l_i|).
// Exact-equality semantics in the formulas below are realized through these
// clusters.
std::vector<std::vector<int>> eigen_clusters(const Vector& eigenvalues);

// Cluster containing eigen index i (as a sorted index range).
std::vector<int> cluster_of(const Vector& eigenvalues, int i);

}  // namespace qsd
