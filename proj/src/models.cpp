#include "qsd/models.hpp"

#include <cmath>
#include <sstream>

#include "qsd/errors.hpp"

namespace qsd::models {

ReversibleChain make_triangle() {
    Matrix p(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p(i, j) = i == j ? 0.5 : 0.25;
    return reversible_chain(validate_kernel(std::move(p)));
}

ReversibleChain make_two_block(int n, double epsilon, double gamma) {
    if (n < 2) throw ParamOutOfRange("two-block: n must be at least 2");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ParamOutOfRange("two-block: epsilon must lie in (0, 1/2)");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ParamOutOfRange("two-block: gamma must lie in (0, 1)");

    const int m = 2 * n;
    const double in_block = (1.0 - gamma) * (1.0 - epsilon) / n;
    const double cross = (1.0 - gamma) * epsilon / n;
    Matrix p(m, m);
    for (int x = 0; x < m; ++x) {
        const bool x1 = x < n;
        for (int y = 0; y < m; ++y) {
            const bool y1 = y < n;
            p(x, y) = (x1 == y1 ? in_block : cross) + (x == y ? gamma : 0.0);
        }
    }
    return reversible_chain(validate_kernel(std::move(p)));
}

FwRates fw_rates(const FwParams& params) {
    if (!(params.beta > 0.0)) throw ParamOutOfRange("fw: beta must be positive");
    const FwRates r{std::exp(-params.beta * params.delta1), std::exp(-params.beta * params.delta2),
                    std::exp(-params.beta * params.delta3), std::exp(-params.beta * params.delta4)};
    for (double rate : {r.a, r.b, r.c, r.d}) {
        if (!(rate > 0.0 && rate < 1.0))
            throw ParamOutOfRange("fw: each rate e^{-beta delta} must lie in (0, 1)");
    }
    return r;
}

ReversibleChain make_fw(const FwParams& params) {
    const FwRates r = fw_rates(params);
    const double mid = 1.0 - r.b - r.c;
    // large barriers at small beta can push the middle row negative;
    // reject instead of clamping, which would invalidate the closed forms
    if (mid < -1e-15) {
        std::ostringstream msg;
        msg << "fw: 1 - b - c = " << mid << " is negative for these parameters";
        throw ParamOutOfRange(msg.str());
    }
    Matrix p(3, 3);
    p(0, 0) = 1.0 - r.a;
    p(0, 1) = r.a;
    p(0, 2) = 0.0;
    p(1, 0) = r.b;
    p(1, 1) = std::max(0.0, mid);
    p(1, 2) = r.c;
    p(2, 0) = 0.0;
    p(2, 1) = r.d;
    p(2, 2) = 1.0 - r.d;
    return reversible_chain(validate_kernel(std::move(p)));
}

TransitionKernel make_nonrev_triangle(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw ParamOutOfRange("nonrev3: p must lie in (0, 1]");
    Matrix q(3, 3);
    const double lo = (1.0 - p) / 3.0;
    const double hi = (1.0 + p) / 3.0;
    const double diag = 1.0 / 3.0;
    q(0, 0) = diag; q(0, 1) = hi; q(0, 2) = lo;
    q(1, 0) = lo;   q(1, 1) = diag; q(1, 2) = hi;
    q(2, 0) = hi;   q(2, 1) = lo;   q(2, 2) = diag;
    return validate_kernel(std::move(q));
}

TransitionKernel make_nonrev_four(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParamOutOfRange("nonrev4: epsilon must lie in (0, 1)");
    const double u = 1.0 - epsilon;
    Matrix q(4, 4, 0.0);
    q(0, 1) = u;
    q(0, 3) = epsilon;
    q(1, 2) = u;
    q(1, 3) = epsilon;
    q(2, 0) = u;
    q(2, 3) = epsilon;
    q(3, 0) = u / 3.0;
    q(3, 1) = u / 3.0;
    q(3, 2) = u / 3.0;
    q(3, 3) = epsilon;
    return validate_kernel(std::move(q));
}

}  // namespace qsd::models
