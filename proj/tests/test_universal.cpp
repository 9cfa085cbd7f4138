#include <doctest.h>

#include <cmath>

#include "useries/enumeration.hpp"
#include "useries/universal.hpp"

using namespace useries;

namespace {

// Demo profile: relaxed geometry and budgets, weak modulus. Feasible on a
// 2^16 grid; block 3 (the constant 1) carries a real band.
struct DemoFixture {
    Grid g{16};
    UniversalSeries series;
    WeightSpec w;
};

const DemoFixture& demo_fixture() {
    static const DemoFixture fx = [] {
        DemoFixture f;
        BuildOptions opts;
        opts.budget_floor = 0.45;
        opts.geometry_floor = 0.45;
        opts.best_effort = true;
        f.series = build_universal_series(4, Modulus::power(1.0, 0.01), f.g, opts);
        f.w = build_weight(f.series, 0.9, f.g);
        return f;
    }();
    return fx;
}

} // namespace

TEST_CASE("strict build over the zero prefix") {
    const Grid g(12);
    const auto s1 = build_universal_series(1, Modulus::power(0.5), g);
    REQUIRE(s1.S == 1);
    CHECK(s1.block(1).f.is_zero());
    CHECK(s1.block(1).N_prev == 1);
    CHECK(s1.block(1).N == 2);
    CHECK(s1.block(1).coeff_budget == 0.0);
    CHECK(s1.block(1).E.measure() == doctest::Approx(kTwoPi));

    const auto s2 = build_universal_series(2, Modulus::power(0.5), g);
    CHECK(s2.block(2).N == 3);
    CHECK(s2.block(2).f.is_zero());
}

TEST_CASE("strict build stops at the first constant block and names it") {
    const Grid g(14);
    try {
        build_universal_series(3, Modulus::power(0.5), g);
        FAIL("expected ConstructionError");
    } catch (const ConstructionError& e) {
        CHECK(e.condition() == "(2)");
        CHECK(std::string(e.what()).find("series block s = 3") != std::string::npos);
    }
}

TEST_CASE("weight over an all-zero series") {
    const Grid g(12);
    const auto series = build_universal_series(2, Modulus::power(1.0), g);
    const auto w = build_weight(series, 0.6, g);
    CHECK(w.n0 == 1);
    CHECK(w.h == std::vector<double>{1.0, 1.0});
    CHECK(w.mu(1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w.mu(2) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(complement_within(w.E, w.B).measure() == 0.0);
    const auto mu = weight_samples(w, g);
    for (std::size_t j = 0; j < mu.size(); j += 37) CHECK(mu[j] == 1.0);
}

TEST_CASE("weight cutoff arithmetic") {
    CHECK(weight_cutoff_n0(0.25) == 3);
    CHECK(weight_cutoff_n0(0.5) == 2);
    CHECK(weight_cutoff_n0(0.9) == 1);
    CHECK(weight_cutoff_n0(0.1) == 4);
    const Grid g(12);
    const auto series = build_universal_series(2, Modulus::power(1.0), g);
    CHECK_THROWS_AS(build_weight(series, 0.25, g), std::invalid_argument); // S <= n0
}

TEST_CASE("strict-geometry best-effort series carries honest plateau sets") {
    const Grid g(14);
    BuildOptions opts;
    opts.budget_floor = 0.45;
    opts.best_effort = true;
    const auto series = build_universal_series(4, Modulus::power(1.0), g, opts);
    REQUIRE(series.S == 4);

    // Block 3 could not truncate within any budget at this height; its band
    // is empty and says so, while its plateau set keeps the strict measure.
    const auto& b3 = series.block(3);
    CHECK_FALSE(b3.ok);
    CHECK(b3.N == b3.N_prev + 1);
    CHECK(b3.complement_measure > 0.0);
    CHECK(b3.complement_measure < BuildOptions::nominal_budget(3));
    CHECK(b3.geometry_epsilon == doctest::Approx(BuildOptions::nominal_budget(3)));

    // The weight construction only needs the sets; (A) holds at eps = 0.25.
    const auto w = build_weight(series, 0.25, g);
    CHECK(w.n0 == 3);
    const double not_one = complement_within(w.E, w.B).measure();
    CHECK(not_one + w.truncation_error_bound < 0.25);
    CHECK(w.h[2] == doctest::Approx(2.0)); // ||f_3|| + empty band + 1

    // mu_n * 2^{2n} * prod h_s == 1 to 1e-12.
    double prod = 1.0;
    for (int n = 1; n <= series.S; ++n) {
        prod *= w.h[static_cast<std::size_t>(n) - 1];
        CHECK(w.mu(n) * std::pow(2.0, 2.0 * n) * prod == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Ring partition covers the circle exactly.
    double total = w.E.measure() + complement_within(w.B, IntervalSet::full_circle()).measure();
    for (int n = w.n0 + 1; n <= w.S; ++n)
        total += complement_within(w.omega_set(n - 1), w.omega_set(n)).measure();
    CHECK(total == doctest::Approx(kTwoPi).epsilon(1e-12));

    // Omega_n nondecreasing.
    for (int n = w.n0; n < w.S; ++n) {
        const auto& a = w.omega_set(n);
        CHECK(intersect(a, w.omega_set(n + 1)).measure() == doctest::Approx(a.measure()).epsilon(1e-12));
    }
}

TEST_CASE("demo fixture: block 3 carries a real band") {
    const auto& fx = demo_fixture();
    const auto& series = fx.series;
    REQUIRE(series.S == 4);
    CHECK(series.block(1).f.is_zero());
    CHECK(series.block(2).f.is_zero());
    CHECK(series.block(3).ok);
    CHECK(series.block(3).N > series.block(3).N_prev + 100);
    CHECK(series.block(4).f.is_zero());

    // Bands chain and never overlap.
    long prev = 1;
    for (const auto& blk : series.blocks) {
        CHECK(blk.N_prev == prev);
        CHECK(blk.N > blk.N_prev);
        prev = blk.N;
    }

    // Approximation really happened: the block tracks the constant 1 on its
    // plateau set within its (relaxed) budget.
    const auto& b3 = series.block(3);
    CHECK(b3.approx_error_on_E < b3.budget);
    CHECK(b3.coeff_budget < 0.45);

    // Coefficient stream lookups.
    CHECK(series.coefficient(1) == std::complex<double>(0.0, 0.0));
    CHECK(series.band_of(1) == 1);
    CHECK(series.band_of(b3.N_prev) == 3);
    bool some_nonzero = false;
    for (long k = b3.N_prev; k < b3.N && !some_nonzero; ++k)
        some_nonzero = series.coefficient(k) != std::complex<double>(0.0, 0.0);
    CHECK(some_nonzero);
    // Hermitian view: C_{-k} = conj(C_k).
    for (long k = b3.N_prev; k < b3.N_prev + 50; ++k)
        CHECK(series.coefficient(-k) == std::conj(series.coefficient(k)));
}

TEST_CASE("demo fixture: weight and properties (A)/(B)") {
    const auto& fx = demo_fixture();
    const auto& w = fx.w;
    CHECK(w.n0 == 1);

    const auto rep = verify_A_B(fx.series, w, fx.series.omega);
    CHECK(rep.ok_measure);
    CHECK(rep.ok_budget);
    CHECK(rep.measure_mu_not_1 > 0.0);

    // mu stays in (0, 1] on the grid and is exactly 1 on E.
    const auto mu = weight_samples(w, fx.g);
    double min_mu = 1.0;
    for (double v : mu) {
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        min_mu = std::min(min_mu, v);
    }
    CHECK(min_mu < 1.0);
    for (const auto& piece : w.E.pieces()) {
        const std::size_t j = fx.g.index_at_or_above(piece.lo);
        if (j < mu.size() && piece.contains(fx.g.x(j))) CHECK(mu[j] == 1.0);
    }

    // weight_eval matches the painted samples.
    for (std::size_t j = 0; j < mu.size(); j += 4097)
        CHECK(weight_eval(w, fx.g.x(j)) == mu[j]);

    // integral of mu sits between 2pi - eps and 2pi.
    double imu = 0.0;
    for (double v : mu) imu += v;
    imu *= fx.g.cell();
    CHECK(imu <= kTwoPi + 1e-9);
    CHECK(imu > kTwoPi - w.epsilon);
}

TEST_CASE("demo fixture: h normalizer is grid-stable") {
    const auto& fx = demo_fixture();
    const double h3 = h_normalizer(3, fx.series, fx.g);
    CHECK(h3 > 2.0); // sup of the spike train plus the two 1s
    const double h3_fine = h_normalizer(3, fx.series, Grid(17));
    CHECK(std::abs(h3 - h3_fine) / h3 < 1e-2);
    CHECK(h_normalizer(1, fx.series, fx.g) == doctest::Approx(1.0));
}

TEST_CASE("demo fixture: weighted chain bounds") {
    const auto& fx = demo_fixture();
    const auto rows = verify_chain_bounds(fx.series, fx.w, fx.g);
    REQUIRE(!rows.empty());
    bool saw_block3 = false;
    for (const auto& row : rows) {
        CHECK(row.ok_adjusted);
        // The off-plateau mass is killed by the weight: the spec-scale bound
        // holds for it even though the truncation budgets were relaxed.
        CHECK(row.lhs_off < row.rhs_off_strict);
        CHECK(row.lhs_partial < row.rhs_partial_adjusted);
        if (row.s == 3) saw_block3 = true;
    }
    CHECK(saw_block3);
}

TEST_CASE("extension matches a direct build") {
    const Grid g(12);
    auto series = build_universal_series(1, Modulus::power(1.0), g);
    extend_universal_series(series, 2, g);
    const auto direct = build_universal_series(2, Modulus::power(1.0), g);
    REQUIRE(series.S == direct.S);
    for (int s = 1; s <= 2; ++s) {
        CHECK(series.block(s).N == direct.block(s).N);
        CHECK(series.block(s).E.measure() == direct.block(s).E.measure());
    }
}
