#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "qsd/errors.hpp"
#include "qsd/models.hpp"
#include "qsd/yaglom.hpp"

using namespace qsd;

namespace {

// the paper-facing coordinates of the fw chain in its nu-gauge:
// nu_2 = (1, 0, -1), nu_3 = (-b/(b+c), 1, -c/(b+c))
struct FwPaperCoords {
    double a2, a3, z;
};
FwPaperCoords fw_paper_coords(const models::FwRates& r, const ProbDist& alpha) {
    const double z = (r.a + r.b + r.c) / r.c;
    const double a3 = alpha[1] - r.a / (r.c * z);
    const double a2 = alpha[0] - r.b / (r.c * z) + r.b / (r.b + r.c) * a3;
    return {a2, a3, z};
}

}  // namespace

TEST_CASE("triangle dominant data: lambda = 1/4, full cluster") {
    const ReversibleChain chain = models::make_triangle();
    const SpectralData spec = eigendecompose(chain);
    const Coordinates c = coordinates(ProbDist::normalized({0.5, 0.3, 0.2}), spec);
    const DominantData dom = dominant_data(c, spec);
    CHECK(std::abs(dom.lambda_alpha - 0.25) < 1e-13);
    CHECK(dom.index_set == std::vector<int>{1, 2});
}

TEST_CASE("two-block dominant data for unbalanced mass") {
    const ReversibleChain chain = models::make_two_block(4, 0.1, 0.3);
    const SpectralData spec = eigendecompose(chain);
    const ProbDist alpha = ProbDist::normalized({0.3, 0.2, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05});
    const DominantData dom = dominant_data(coordinates(alpha, spec), spec);
    CHECK(std::abs(dom.lambda_alpha - 0.86) < 1e-12);
    CHECK(dom.index_set == std::vector<int>{1});
}

TEST_CASE("fw start with a2 = 0 and a3 < 0 picks the smaller eigenvalue") {
    const models::FwParams params{std::log(2.0), 2.0, 3.0, 3.0, 2.0};
    const models::FwRates r = models::fw_rates(params);
    const ReversibleChain chain = models::make_fw(params);
    const SpectralData spec = eigendecompose(chain);
    // along nu_3 on the negative side: alpha = pi - t nu_3
    Vector v(3);
    const double t = 0.1;
    v[0] = chain.pi[0] + t * r.b / (r.b + r.c);
    v[1] = chain.pi[1] - t;
    v[2] = chain.pi[2] + t * r.c / (r.b + r.c);
    const ProbDist alpha = ProbDist::normalized(v);
    const DominantData dom = dominant_data(coordinates(alpha, spec), spec);
    CHECK(std::abs(dom.lambda_alpha - (1 - r.a - r.b - r.c)) < 1e-12);
    CHECK(dom.index_set == std::vector<int>{2});
}

TEST_CASE("stationary start is rejected") {
    const ReversibleChain chain = models::make_triangle();
    const SpectralData spec = eigendecompose(chain);
    CHECK_THROWS_AS(dominant_data(coordinates(chain.pi, spec), spec), StationaryStart);
    CHECK_THROWS_AS(yaglom_limit(chain.pi, spec), StationaryStart);
}

TEST_CASE("triangle ell is 1 - 3 min alpha") {
    std::mt19937_64 rng(61);
    const ReversibleChain chain = models::make_triangle();
    const SpectralData spec = eigendecompose(chain);
    for (int rep = 0; rep < 25; ++rep) {
        const ProbDist alpha = qsd::testing::random_alpha(3, rng);
        const Coordinates c = coordinates(alpha, spec);
        const DominantData dom = dominant_data(c, spec);
        const double ell = ell_alpha(c, spec, dom.index_set);
        CHECK(std::abs(ell - (1.0 - 3.0 * alpha.min_entry())) < 1e-12);
    }
}

TEST_CASE("two-block equal-mass ell is n (1/n - q_min)") {
    const int n = 4;
    const ReversibleChain chain = models::make_two_block(n, 0.1, 0.3);
    const SpectralData spec = eigendecompose(chain);
    std::mt19937_64 rng(67);
    const ProbDist p = qsd::testing::random_alpha(n, rng);
    const ProbDist q = qsd::testing::random_alpha(n, rng);
    Vector v(2 * n);
    for (int i = 0; i < n; ++i) {
        v[i] = 0.5 * p[i];
        v[n + i] = 0.5 * q[i];
    }
    const ProbDist alpha = ProbDist::normalized(v);
    const Coordinates c = coordinates(alpha, spec);
    const DominantData dom = dominant_data(c, spec);
    CHECK(std::abs(dom.lambda_alpha - 0.3) < 1e-12);  // the gamma cluster
    const double ell = ell_alpha(c, spec, dom.index_set);
    const double min_half = std::min(p.min_entry(), q.min_entry()) * 0.5;
    CHECK(std::abs(ell - 2.0 * n * (1.0 / (2 * n) - min_half)) < 1e-12);
}

TEST_CASE("fw case 1: ell = a2 Z in the paper gauge") {
    const models::FwParams params{std::log(2.0), 2.0, 3.0, 3.0, 2.0};
    const models::FwRates r = models::fw_rates(params);
    const ReversibleChain chain = models::make_fw(params);
    const SpectralData spec = eigendecompose(chain);
    const ProbDist alpha = ProbDist::dirac(3, 0);
    const FwPaperCoords paper = fw_paper_coords(r, alpha);
    REQUIRE(paper.a2 > 0.0);
    const Coordinates c = coordinates(alpha, spec);
    const DominantData dom = dominant_data(c, spec);
    const double ell = ell_alpha(c, spec, dom.index_set);
    CHECK(std::abs(ell - paper.a2 * paper.z) < 1e-12);  // ell is gauge invariant
}

TEST_CASE("triangle yaglom limit reduces and renormalizes the entries") {
    const ReversibleChain chain = models::make_triangle();
    const YaglomReport report = yaglom_limit(ProbDist::normalized({0.5, 0.3, 0.2}), chain);
    const double expected[3] = {0.75, 0.25, 0.0};
    for (int y = 0; y < 3; ++y) CHECK(std::abs(report.phi_star[y] - expected[y]) < 1e-13);
    CHECK(report.halting_state == 2);
    CHECK(std::abs(report.ell_alpha - 0.4) < 1e-14);
    CHECK(report.phi_star_min_raw >= -1e-12);
    // independently verified by the trajectory at t = 60
    const TrajectoryResult traj =
        conditional_trajectory(ProbDist::normalized({0.5, 0.3, 0.2}), chain.kernel, 60);
    CHECK(sup_diff(report.phi_star.values(), traj.trajectory.phi.back().values()) < 1e-10);
}

TEST_CASE("two-block trichotomy branches 1 and 2 give the uniform block") {
    const int n = 4;
    const ReversibleChain chain = models::make_two_block(n, 0.1, 0.3);
    const SpectralData spec = eigendecompose(chain);

    const ProbDist heavy_first = ProbDist::normalized({0.3, 0.2, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05});
    const YaglomReport r1 = yaglom_limit(heavy_first, spec);
    for (int y = 0; y < 2 * n; ++y)
        CHECK(std::abs(r1.phi_star[y] - (y < n ? 1.0 / n : 0.0)) < 1e-12);

    const ProbDist heavy_second = ProbDist::normalized({0.1, 0.1, 0.05, 0.05, 0.3, 0.2, 0.1, 0.1});
    const YaglomReport r2 = yaglom_limit(heavy_second, spec);
    for (int y = 0; y < 2 * n; ++y)
        CHECK(std::abs(r2.phi_star[y] - (y < n ? 0.0 : 1.0 / n)) < 1e-12);
}

TEST_CASE("fw four sign classes reproduce the case formulas") {
    const models::FwParams params{std::log(2.0), 2.0, 3.0, 3.0, 2.0};
    const models::FwRates rates = models::fw_rates(params);
    const ReversibleChain chain = models::make_fw(params);
    const SpectralData spec = eigendecompose(chain);
    const double bc = rates.b + rates.c;
    const double abc = rates.a + rates.b + rates.c;

    // case 1: a2 > 0
    const YaglomReport c1 = yaglom_limit(ProbDist::dirac(3, 0), spec);
    CHECK(std::abs(c1.lambda_alpha - (1 - rates.a)) < 1e-12);
    CHECK(std::abs(c1.phi_star[0] - bc / abc) < 1e-12);
    CHECK(std::abs(c1.phi_star[1] - rates.a / abc) < 1e-12);
    CHECK(std::abs(c1.phi_star[2]) < 1e-12);

    // case 2: a2 < 0
    const YaglomReport c2 = yaglom_limit(ProbDist::dirac(3, 2), spec);
    CHECK(std::abs(c2.phi_star[0]) < 1e-12);
    CHECK(std::abs(c2.phi_star[1] - rates.a / abc) < 1e-12);
    CHECK(std::abs(c2.phi_star[2] - bc / abc) < 1e-12);

    // case 3: a2 = 0, a3 > 0
    const YaglomReport c3 = yaglom_limit(ProbDist::dirac(3, 1), spec);
    CHECK(std::abs(c3.lambda_alpha - (1 - abc)) < 1e-12);
    CHECK(std::abs(c3.phi_star[0]) < 1e-12);
    CHECK(std::abs(c3.phi_star[1] - 1.0) < 1e-12);
    CHECK(std::abs(c3.phi_star[2]) < 1e-12);

    // case 4: a2 = 0, a3 < 0
    Vector v(3);
    const double t = 0.1;
    v[0] = chain.pi[0] + t * rates.b / bc;
    v[1] = chain.pi[1] - t;
    v[2] = chain.pi[2] + t * rates.c / bc;
    const YaglomReport c4 = yaglom_limit(ProbDist::normalized(v), spec);
    CHECK(std::abs(c4.phi_star[0] - rates.b / bc) < 1e-12);
    CHECK(std::abs(c4.phi_star[1]) < 1e-12);
    CHECK(std::abs(c4.phi_star[2] - rates.c / bc) < 1e-12);
}

TEST_CASE("simplified and general formulas agree on singleton clusters") {
    std::mt19937_64 rng(71);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 3 + static_cast<int>(rng() % 6);
        const ReversibleChain chain = qsd::testing::random_reversible_chain(n, rng);
        const SpectralData spec = eigendecompose(chain);
        const YaglomReport report = yaglom_limit(qsd::testing::random_alpha(n, rng), spec);
        if (report.used_simplified) CHECK(report.simplified_residual < 1e-10);
    }
}

TEST_CASE("yaglom output is gauge independent under cluster re-mixing") {
    const ReversibleChain chain = models::make_triangle();
    const SpectralData spec = eigendecompose(chain);
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
    const ProbDist alpha = qsd::testing::random_alpha(3, rng);
    const YaglomReport base = yaglom_limit(alpha, spec);
    for (int rep = 0; rep < 5; ++rep) {
        const double t = u(rng);
        const double c = std::cos(t), s = std::sin(t);
        SpectralData mixed = spec;
        for (int y = 0; y < 3; ++y) {
            mixed.left[1][y] = c * spec.left[1][y] + s * spec.left[2][y];
            mixed.left[2][y] = -s * spec.left[1][y] + c * spec.left[2][y];
            mixed.right[1][y] = c * spec.right[1][y] + s * spec.right[2][y];
            mixed.right[2][y] = -s * spec.right[1][y] + c * spec.right[2][y];
        }
        const YaglomReport rotated = yaglom_limit(alpha, mixed);
        CHECK(sup_diff(base.phi_star.values(), rotated.phi_star.values()) < 1e-9);
        CHECK(std::abs(base.ell_alpha - rotated.ell_alpha) < 1e-9);
    }
}

TEST_CASE("oracle equivalence on random chains") {
    std::mt19937_64 rng(79);
    int done = 0;
    while (done < 20) {
        const int n = 3 + static_cast<int>(rng() % 6);
        const ReversibleChain chain = qsd::testing::random_reversible_chain(n, rng);
        const SpectralData spec = eigendecompose(chain);
        const ProbDist alpha = qsd::testing::random_alpha(n, rng);

        const Coordinates c = coordinates(alpha, spec);
        if (sup_norm(c.a) < 1e-8) continue;
        const DominantData dom = dominant_data(c, spec);
        const int after = dom.index_set.back() + 1;
        const double next = after < n ? spec.eigenvalues[after] : 0.0;
        const double ratio = next / dom.lambda_alpha;
        if (ratio > 0.95) continue;
        const int horizon = ratio <= 0.0 ? 10
                                         : static_cast<int>(std::ceil(std::log(1e-9) / std::log(ratio)));

        const YaglomReport report = yaglom_limit(alpha, spec);
        const TrajectoryResult traj = conditional_trajectory(alpha, chain.kernel, horizon);
        REQUIRE_FALSE(traj.trajectory.terminated_at.has_value());
        CHECK(sup_diff(report.phi_star.values(), traj.trajectory.phi.back().values()) < 1e-7);
        ++done;
    }
}

TEST_CASE("verify_properties residuals are small on the two-block chain") {
    const ReversibleChain chain = models::make_two_block(4, 0.1, 0.3);
    const SpectralData spec = eigendecompose(chain);
    const ProbDist alpha = ProbDist::normalized({0.3, 0.2, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05});
    const YaglomReport report = yaglom_limit(alpha, spec);
    const TrajectoryResult traj = conditional_trajectory(alpha, chain.kernel, 199);
    const PropertyResiduals res = verify_properties(report, spec, traj.profile);
    CHECK(res.eigen_identity_max < 1e-9);
    CHECK(res.ratio_gap < 1e-8);
    CHECK(res.phi_star_min <= 1e-10);
    CHECK(res.vbar_residual < 1e-9);
}

TEST_CASE("triangle separation ratio is exactly 1/4 from a vertex") {
    const ReversibleChain chain = models::make_triangle();
    const TrajectoryResult traj = conditional_trajectory(ProbDist::dirac(3, 0), chain.kernel, 50);
    for (int t = 1; t <= 50; ++t)
        CHECK(std::abs(traj.profile.s[t] / traj.profile.s[t - 1] - 0.25) < 1e-13);
}

TEST_CASE("basin map of the grid-aligned fw chain has four classes") {
    // b = c makes the a2 = 0 line exactly {w1 = w3}, which meets the grid
    const models::FwParams params{std::log(2.0), 2.0, 3.0, 3.0, 2.0};
    const ReversibleChain chain = models::make_fw(params);
    const BasinMap map = classify_basins(chain, 20);
    CHECK(map.class_phi.size() == 4);
    // pi = (1/4, 1/2, 1/4) sits on the grid and is skipped
    CHECK(static_cast<int>(map.rows.size()) == 21 * 22 / 2 - 1);
    std::vector<int> sizes = map.class_sizes;
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes[0] + sizes[1] == 10);   // the two segments on the w1 = w3 line
    CHECK(sizes[2] == sizes[3]);        // symmetric bulk classes
}

TEST_CASE("triangle basin classes grow with resolution and stay collinear") {
    const ReversibleChain chain = models::make_triangle();
    const BasinMap coarse = classify_basins(chain, 10);
    const BasinMap fine = classify_basins(chain, 30);
    CHECK(fine.class_phi.size() > coarse.class_phi.size());

    // probes sharing a class are collinear with pi
    const double third = 1.0 / 3.0;
    std::vector<BasinMap::Row> first_of_class(fine.class_phi.size(),
                                              BasinMap::Row{0, 0, 0, -1, 0});
    for (const auto& row : fine.rows) {
        auto& head = first_of_class[static_cast<std::size_t>(row.class_id)];
        if (head.class_id < 0) {
            head = row;
            continue;
        }
        const double ax = head.w1 - third, ay = head.w2 - third;
        const double bx = row.w1 - third, by = row.w2 - third;
        CHECK(std::abs(ax * by - ay * bx) < 1e-9);  // parallel rays from pi
    }
}

TEST_CASE("basins reject unsupported dimensions and tiny resolutions") {
    CHECK_THROWS_AS(classify_basins(models::make_two_block(2, 0.1, 0.3), 20), UnsupportedDimension);
    CHECK_THROWS_AS(classify_basins(models::make_triangle(), 5), ParamOutOfRange);
}

TEST_CASE("absorbing qsd of the fw restricted matrix matches the closed form") {
    const models::FwParams params{8.0, 2.0, 3.0, 1.0, 2.0};
    const models::FwRates r = models::fw_rates(params);
    Matrix restricted(2, 2);
    restricted(0, 0) = 1 - r.a;
    restricted(0, 1) = r.a;
    restricted(1, 0) = r.b;
    restricted(1, 1) = 1 - r.b - r.c;
    const AbsorbingQsd qsd_out = absorbing_qsd(restricted);

    const double disc = std::sqrt(2 * r.c * (r.b - r.a) + (r.a + r.b) * (r.a + r.b) + r.c * r.c);
    const double lambda_expected = 0.5 * (disc - r.a - r.b - r.c + 2.0);
    CHECK(std::abs(qsd_out.lambda_star - lambda_expected) < 1e-14);
    const double phi0 = (disc - r.a - r.b + r.c) / (2 * r.c);
    const double phi1 = 2 * r.a / (disc + r.a + r.b + r.c);
    // the displayed eigenvector normalizes to mass one already
    CHECK(std::abs(phi0 + phi1 - 1.0) < 1e-12);
    CHECK(std::abs(qsd_out.phi_star[0] - phi0) < 1e-12);
    CHECK(std::abs(qsd_out.phi_star[1] - phi1) < 1e-12);

    // left-eigenvector residual
    const Vector z = left_apply(qsd_out.phi_star.values(), restricted);
    for (int y = 0; y < 2; ++y)
        CHECK(std::abs(z[y] - qsd_out.lambda_star * qsd_out.phi_star[y]) < 1e-10);
}

TEST_CASE("absorbing qsd of a single leaking state") {
    Matrix m(1, 1);
    m(0, 0) = 0.9;
    const AbsorbingQsd out = absorbing_qsd(m);
    CHECK(out.phi_star[0] == 1.0);
    CHECK(std::abs(out.lambda_star - 0.9) < 1e-15);
    CHECK(std::abs(out.escape_rate - 0.1) < 1e-15);
}

TEST_CASE("absorbing qsd approaches (c/(a+c), a/(a+c)) at large beta") {
    const models::FwParams params{12.0, 2.0, 3.0, 1.0, 2.0};
    const models::FwRates r = models::fw_rates(params);
    Matrix restricted(2, 2);
    restricted(0, 0) = 1 - r.a;
    restricted(0, 1) = r.a;
    restricted(1, 0) = r.b;
    restricted(1, 1) = 1 - r.b - r.c;
    const AbsorbingQsd out = absorbing_qsd(restricted);
    CHECK(out.phi_star[0] == doctest::Approx(r.c / (r.a + r.c)).epsilon(1e-3));
    CHECK(out.phi_star[1] == doctest::Approx(r.a / (r.a + r.c)).epsilon(1e-3));
    CHECK(std::abs(out.escape_rate - r.a) / r.a < 1e-3);  // lambda* ~ 1 - a
}

TEST_CASE("absorbing qsd validates its input") {
    Matrix stochastic(2, 2);
    stochastic(0, 0) = 0.5;
    stochastic(0, 1) = 0.5;
    stochastic(1, 0) = 0.5;
    stochastic(1, 1) = 0.5;
    CHECK_THROWS_AS(absorbing_qsd(stochastic), ValidationError);

    Matrix reducible(2, 2, 0.0);
    reducible(0, 0) = 0.9;
    reducible(1, 1) = 0.9;
    CHECK_THROWS_AS(absorbing_qsd(reducible), NotIrreducible);
}
