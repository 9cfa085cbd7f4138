#include <doctest.h>

#include <cmath>
#include <random>

#include "useries/grid.hpp"
#include "useries/interval_set.hpp"
#include "useries/lemma.hpp"

using namespace useries;

TEST_CASE("measure of normalized sets") {
    CHECK(IntervalSet({{0.0, 1.0}, {0.5, 2.0}}).measure() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(IntervalSet::empty().measure() == 0.0);
    CHECK(IntervalSet::full_circle().measure() == doctest::Approx(kTwoPi).epsilon(1e-15));
}

TEST_CASE("intersect") {
    const IntervalSet a({{0.0, 1.0}});
    const auto i = intersect(a, IntervalSet({{0.5, 2.0}}));
    REQUIRE(i.piece_count() == 1);
    CHECK(i.pieces()[0].lo == doctest::Approx(0.5));
    CHECK(i.pieces()[0].hi == doctest::Approx(1.0));

    const IntervalSet s({{0.3, 0.9}, {2.0, 3.0}});
    const auto with_full = intersect(s, IntervalSet::full_circle());
    CHECK(with_full.measure() == doctest::Approx(s.measure()).epsilon(1e-15));
    CHECK(intersect(a, IntervalSet({{1.5, 2.0}})).is_empty());
}

TEST_CASE("complement_within") {
    const auto c = complement_within(IntervalSet({{0.0, kTwoPi / 2.0}}), IntervalSet::full_circle());
    REQUIRE(c.piece_count() == 1);
    CHECK(c.pieces()[0].lo == doctest::Approx(kTwoPi / 2.0));
    CHECK(c.pieces()[0].hi == doctest::Approx(kTwoPi));

    const IntervalSet u({{0.1, 1.4}, {3.0, 4.0}});
    CHECK(complement_within(u, u).is_empty());
    const auto ident = complement_within(IntervalSet::empty(), IntervalSet({{0.0, 2.0}}));
    CHECK(ident.measure() == doctest::Approx(2.0));
}

TEST_CASE("integrate_on_set against closed forms") {
    const Grid g(18);
    const auto sine = g.sample([](double x) { return std::sin(x); });
    const double half = integrate_on_set(sine, IntervalSet({{0.0, kTwoPi / 2.0}}), g);
    CHECK(half == doctest::Approx(2.0).epsilon(1e-6));

    const std::vector<double> ones(g.size(), 1.0);
    const IntervalSet s({{0.3, 0.9}, {2.0, 5.5}});
    // within one cell width per boundary piece
    CHECK(std::abs(integrate_on_set(ones, s, g) - s.measure()) <= 4.0 * g.cell());

    // The spike profile has exact mean zero; with eps = 1/2 its edges land on
    // dyadic grid points, so the quadrature cancels to rounding.
    const auto spike = g.sample([](double x) { return spike_eval(0.5, x); });
    CHECK(std::abs(integrate_on_set(spike, IntervalSet::full_circle(), g)) < 1e-9);

    std::vector<double> bad(g.size() - 1, 0.0);
    CHECK_THROWS_AS(integrate_on_set(bad, s, g), std::invalid_argument);
}

TEST_CASE("sample_subsets contract") {
    const IntervalSet E({{0.0, 2.0}, {3.0, 5.0}});
    const auto subs = sample_subsets(E, 25, 4, 42);
    REQUIRE(subs.size() == 25);
    CHECK(subs[0].measure() == doctest::Approx(E.measure()));
    CHECK(subs[1].is_empty());
    for (const auto& e : subs) {
        CHECK(e.measure() <= E.measure() + 1e-12);
        // subset property: e intersect E == e
        CHECK(intersect(e, E).measure() == doctest::Approx(e.measure()).epsilon(1e-12));
    }
    const auto again = sample_subsets(E, 25, 4, 42);
    for (std::size_t i = 0; i < subs.size(); ++i) {
        REQUIRE(again[i].piece_count() == subs[i].piece_count());
        for (std::size_t p = 0; p < subs[i].piece_count(); ++p) {
            CHECK(again[i].pieces()[p].lo == subs[i].pieces()[p].lo);
            CHECK(again[i].pieces()[p].hi == subs[i].pieces()[p].hi);
        }
    }
    CHECK(sample_subsets(E, 2, 3, 7).size() == 2);
}

TEST_CASE("measure additivity on random disjoint pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int trial = 0; trial < 50; ++trial) {
        double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        if (a > b) std::swap(a, b);
        if (c > d) std::swap(c, d);
        IntervalSet s({{a, b}});
        IntervalSet t = complement_within(s, IntervalSet({{c, d}}));
        REQUIRE(intersect(s, t).is_empty());
        CHECK(set_union(s, t).measure() ==
              doctest::Approx(s.measure() + t.measure()).epsilon(1e-12));
    }
}

TEST_CASE("quadrature additivity over disjoint sets") {
    const Grid g(12);
    const auto v = g.sample([](double x) { return std::cos(3.0 * x) + 0.5; });
    const IntervalSet s({{0.2, 1.7}});
    const IntervalSet t({{2.0, 4.1}});
    const double lhs = integrate_on_set(v, set_union(s, t), g);
    const double rhs = integrate_on_set(v, s, g) + integrate_on_set(v, t, g);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("complement and intersect round-trip exactly") {
    const IntervalSet u({{0.0, 3.0}, {4.0, 6.0}});
    const IntervalSet s({{0.5, 1.0}, {4.5, 5.0}});
    CHECK(intersect(s, complement_within(s, u)).is_empty());
}

TEST_CASE("quadrature error halves when the cell width halves") {
    // Dyadic endpoints stay exactly on the grid at every level, so the
    // left-rule boundary error scales cleanly with the cell width.
    const double b = kTwoPi / 4.0;
    const IntervalSet s({{0.0, b}});
    struct Case {
        double (*f)(double);
        double exact;
    };
    for (const Case& c : {Case{std::sin, 1.0 - std::cos(b)}, Case{std::cos, std::sin(b)}}) {
        double prev_err = -1.0;
        for (int log2 : {12, 13, 14}) {
            const Grid g(log2);
            const double got = integrate_on_set(g.sample(c.f), s, g);
            const double err = std::abs(got - c.exact);
            if (prev_err > 0.0) CHECK(err * 2.0 <= prev_err * 1.05);
            prev_err = err;
        }
    }
}

TEST_CASE("interval set input validation") {
    CHECK_THROWS_AS(IntervalSet({{2.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(sample_subsets(IntervalSet::full_circle(), 0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Grid(9), std::invalid_argument);
}
