#include <doctest.h>

#include <cmath>

#include "useries/rearrange.hpp"

using namespace useries;

namespace {

struct Fixture {
    Grid g{16};
    UniversalSeries series;
    WeightSpec w;
    std::vector<double> mu;
};

const Fixture& fixture() {
    static const Fixture fx = [] {
        Fixture f;
        BuildOptions opts;
        opts.budget_floor = 0.45;
        opts.geometry_floor = 0.45;
        opts.best_effort = true;
        f.series = build_universal_series(4, Modulus::power(1.0, 0.01), f.g, opts);
        f.w = build_weight(f.series, 0.9, f.g);
        f.mu = weight_samples(f.w, f.g);
        return f;
    }();
    return fx;
}

Target const_target(double c, const Grid& g) {
    Target t;
    t.samples.assign(g.size(), c);
    return t;
}

} // namespace

TEST_CASE("zero target converges through zero blocks") {
    const auto& fx = fixture();
    auto series = fx.series;
    const auto r = rearrange_run(const_target(0.0, fx.g), series, fx.w, fx.g, 1e-3, 4);
    CHECK(r.converged);
    REQUIRE(r.error_curve.size() == 1);
    CHECK(r.error_curve[0] == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(r.chosen_nu.size() == 1);
    // nu_1 > n0 + 1 = 2; index 3 is the constant 1 (too far), 4 is a zero.
    CHECK(r.chosen_nu[0] == 4);
    REQUIRE(r.chosen_m.size() == 1);
    CHECK(r.chosen_m[0] == 1);
}

TEST_CASE("constant target uses the real block and lands under tol") {
    const auto& fx = fixture();
    auto series = fx.series;
    const auto r = rearrange_run(const_target(1.0, fx.g), series, fx.w, fx.g, 0.05, 4);
    CHECK(r.converged);
    REQUIRE(!r.error_curve.empty());
    CHECK(r.chosen_nu[0] == 3);
    CHECK(r.error_curve.back() < 0.05);
    for (std::size_t i = 0; i < r.error_curve.size(); ++i)
        CHECK(r.error_curve[i] < r.bound_curve[i]);

    // sigma-injectivity and support containment over the whole emission.
    std::unordered_set<long> seen;
    for (const auto& e : r.series.emissions) {
        CHECK(seen.insert(e.k).second);
        CHECK(series.coefficient(e.k) == e.c);
    }
    // Hermitian pairs are adjacent: +k immediately followed by -k.
    for (std::size_t i = 0; i + 1 < r.series.emissions.size(); i += 2) {
        CHECK(r.series.emissions[i].k == -r.series.emissions[i + 1].k);
        CHECK(r.series.emissions[i].k > 0);
    }
    // Round 1 emitted the whole block-3 band range plus one filler pair.
    const auto width = static_cast<std::size_t>(series.block(3).N - series.block(3).N_prev);
    CHECK(r.series.emissions.size() == 2 * (width + 1));
}

TEST_CASE("weighted-vs-plain separation on a ring-supported target") {
    const auto& fx = fixture();
    auto series = fx.series;

    // 0.15/mu on the small-weight rings: enormous in plain L1, tiny in the
    // weighted metric.
    Target t;
    t.samples.assign(fx.g.size(), 0.0);
    for (std::size_t j = 0; j < t.samples.size(); ++j)
        if (fx.mu[j] < 1.0) t.samples[j] = 0.15 / fx.mu[j];

    const std::vector<double> ones(fx.g.size(), 1.0);
    const std::vector<double> zeros(fx.g.size(), 0.0);
    const double plain_mass = weighted_l1_distance(t.samples, zeros, ones, fx.g);
    const double weighted_mass = weighted_l1_distance(t.samples, zeros, fx.mu, fx.g);
    CHECK(plain_mass > 100.0);
    CHECK(weighted_mass < 0.25);

    const auto r = rearrange_run(t, series, fx.w, fx.g, 0.1, 4);
    CHECK(r.converged);
    CHECK(r.error_curve.back() < 0.1);
    // The plain-L1 distance stays enormous: approximation happened only in
    // the weighted space.
    CHECK(plain_mass / std::max(r.error_curve.back(), 1e-9) > 1000.0);
}

TEST_CASE("combined constant plus ring target") {
    const auto& fx = fixture();
    auto series = fx.series;
    Target t;
    t.samples.assign(fx.g.size(), 1.0);
    for (std::size_t j = 0; j < t.samples.size(); ++j)
        if (fx.mu[j] < 1.0) t.samples[j] = 0.1 / fx.mu[j];
    const auto r = rearrange_run(t, series, fx.w, fx.g, 0.1, 4);
    CHECK(r.converged);
    CHECK(r.chosen_nu[0] == 3);
}

TEST_CASE("depth exhaustion reports and deepening is attempted") {
    const auto& fx = fixture();
    auto series = fx.series;
    Target t;
    const double pi = kTwoPi / 2.0;
    t.samples.resize(fx.g.size());
    for (std::size_t j = 0; j < t.samples.size(); ++j)
        t.samples[j] = fx.g.x(j) < pi ? 1.0 : -1.0;

    SUBCASE("without deepening") {
        try {
            rearrange_run(t, series, fx.w, fx.g, 0.05, 3);
            FAIL("expected depth exhaustion");
        } catch (const ConstructionError& e) {
            CHECK(e.condition() == "depth");
        }
    }

    SUBCASE("deepen callback extends the series, then exhausts honestly") {
        BuildOptions opts;
        opts.budget_floor = 0.45;
        opts.geometry_floor = 0.45;
        opts.best_effort = true;
        int deepens = 0;
        auto deepen = [&](UniversalSeries& s, int S_now) {
            if (S_now >= 6) return false;
            extend_universal_series(s, 6, fx.g, opts);
            ++deepens;
            return true;
        };
        CHECK_THROWS_AS(rearrange_run(t, series, fx.w, fx.g, 0.05, 3, deepen), ConstructionError);
        CHECK(deepens == 1);
        CHECK(series.S == 6);
    }
}

TEST_CASE("filler picks the minimal unused frequency outside chosen bands") {
    UniversalSeries series;
    series.S = 3;
    series.grid_log2 = 12;
    SeriesBlock b1;
    b1.s = 1;
    b1.N_prev = 1;
    b1.N = 6;
    SeriesBlock b2;
    b2.s = 2;
    b2.N_prev = 6;
    b2.N = 7;
    SeriesBlock b3;
    b3.s = 3;
    b3.N_prev = 7;
    b3.N = 8;
    series.blocks = {b1, b2, b3};

    RearrangeState state;
    SUBCASE("nothing used") { CHECK(pick_filler_index(state, series) == 1); }

    SUBCASE("bands 1..5 and 7 blocked") {
        state.chosen_nu = {1, 3}; // bands [1,6) and [7,8)
        CHECK(pick_filler_index(state, series) == 6);
        state.used_freqs.insert(6);
        CHECK(pick_filler_index(state, series) == 8);
    }
}

TEST_CASE("fillers keep exhausting the low frequencies round by round") {
    const auto& fx = fixture();
    auto unemitted_below_max = [&](int max_q) {
        auto series = fx.series;
        const auto r = rearrange_run(const_target(1.0, fx.g), series, fx.w, fx.g, 0.0, max_q);
        long max_k = 0;
        std::unordered_set<long> seen;
        for (const auto& e : r.series.emissions) {
            max_k = std::max(max_k, e.k);
            seen.insert(e.k);
        }
        long holes = 0;
        for (long k = 1; k < max_k; ++k)
            if (!seen.contains(k)) ++holes;
        return holes;
    };
    const long h1 = unemitted_below_max(1);
    const long h2 = unemitted_below_max(2);
    CHECK(h2 < h1);
}

TEST_CASE("runs are deterministic") {
    const auto& fx = fixture();
    auto s1 = fx.series;
    auto s2 = fx.series;
    const auto r1 = rearrange_run(const_target(1.0, fx.g), s1, fx.w, fx.g, 0.05, 4);
    const auto r2 = rearrange_run(const_target(1.0, fx.g), s2, fx.w, fx.g, 0.05, 4);
    REQUIRE(r1.error_curve.size() == r2.error_curve.size());
    for (std::size_t i = 0; i < r1.error_curve.size(); ++i)
        CHECK(r1.error_curve[i] == r2.error_curve[i]);
    REQUIRE(r1.series.emissions.size() == r2.series.emissions.size());
    for (std::size_t i = 0; i < r1.series.emissions.size(); ++i) {
        CHECK(r1.series.emissions[i].k == r2.series.emissions[i].k);
        CHECK(r1.series.emissions[i].c == r2.series.emissions[i].c);
    }
}
