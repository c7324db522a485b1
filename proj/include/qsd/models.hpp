#pragma once

#include "qsd/chain.hpp"

namespace qsd::models {

// Homogeneous 3-state mean-field chain P = (1/4)[[2,1,1],[1,2,1],[1,1,2]].
// Uniform stationary distribution, eigenvalues (1, 1/4, 1/4).
ReversibleChain make_triangle();

// Two blocks of n states with in-block rate (1-eps)/n and cross rate eps/n,
// made lazy: P = (1-gamma) Q + gamma I. Eigenvalues 1,
// (1-gamma)(1-2 eps) + gamma, and gamma with multiplicity 2n-2.
ReversibleChain make_two_block(int n, double epsilon, double gamma);

// Low-temperature 1-d random walk: rates a = e^{-beta d1}, b = e^{-beta d2},
// c = e^{-beta d3}, d = e^{-beta d4} on the tridiagonal 3-state kernel.
struct FwParams {
    double beta;
    double delta1, delta2, delta3, delta4;
};
struct FwRates {
    double a, b, c, d;
};
FwRates fw_rates(const FwParams& params);
ReversibleChain make_fw(const FwParams& params);

// 3-state rotating chain P = |1><pi| + (p/sqrt(3)) A; bistochastic, complex
// non-principal spectrum, conditional distributions cycle with period 4.
TransitionKernel make_nonrev_triangle(double p);

// 4-state chain cycling 1 -> 2 -> 3 -> 1 with escape rate eps to state 4;
// pi equals the last row. Conditional distributions cycle with period 3.
TransitionKernel make_nonrev_four(double epsilon);

}  // namespace qsd::models
