#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "useries/interval_set.hpp"

namespace useries {

// Uniform power-of-two sampling of [0, 2*pi). One grid serves both
// quadrature and the discrete Fourier transform so that every integral and
// every coefficient in a run is computed from the same samples.
struct Grid {
    int log2_points = 18;

    explicit Grid(int log2) : log2_points(log2) {
        if (log2 < 10) throw std::invalid_argument("Grid: log2_points must be >= 10");
        if (log2 > 26) throw std::invalid_argument("Grid: log2_points above 26 is not supported");
    }
    Grid() = default;

    std::size_t size() const { return std::size_t{1} << log2_points; }
    double cell() const { return kTwoPi / static_cast<double>(size()); }
    double x(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(size()); }
    // Highest frequency the grid can carry without aliasing (exclusive).
    long max_frequency() const { return static_cast<long>(size() / 2); }

    std::vector<double> sample(const std::function<double(double)>& f) const;

    // First sample index at or above t (snapping exact dyadic boundaries).
    std::size_t index_at_or_above(double t) const;
};

// Left-rule Riemann sum of the samples restricted to S: cell weight times
// the sum of values at grid points lying in S under the [lo, hi) convention.
double integrate_on_set(const std::vector<double>& values, const IntervalSet& S, const Grid& g);
double integrate(const std::vector<double>& values, const Grid& g);

// Quadrature of |a - b| * w over the full circle.
double weighted_l1_distance(const std::vector<double>& a, const std::vector<double>& b,
                            const std::vector<double>& w, const Grid& g);

} // namespace useries
