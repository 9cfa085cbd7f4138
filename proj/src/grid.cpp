#include "useries/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace useries {

std::vector<double> Grid::sample(const std::function<double(double)>& f) const {
    std::vector<double> v(size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(x(j));
    return v;
}

std::size_t Grid::index_at_or_above(double t) const {
    if (t <= 0.0) return 0;
    const double q = t / cell();
    const double r = std::round(q);
    // Dyadic interval endpoints land exactly on grid points at every level up
    // to log2_points; snap so that shared endpoints never double-count.
    double qq = (std::abs(q - r) < 1e-9) ? r : std::ceil(q);
    if (qq < 0.0) qq = 0.0;
    const auto n = static_cast<double>(size());
    if (qq > n) qq = n;
    return static_cast<std::size_t>(qq);
}

double integrate_on_set(const std::vector<double>& values, const IntervalSet& S, const Grid& g) {
    if (values.size() != g.size())
        throw std::invalid_argument("integrate_on_set: sample count does not match grid");
    double acc = 0.0;
    for (const auto& p : S.pieces()) {
        const std::size_t jlo = g.index_at_or_above(p.lo);
        const std::size_t jhi = g.index_at_or_above(p.hi);
        for (std::size_t j = jlo; j < jhi; ++j) acc += values[j];
    }
    return acc * g.cell();
}

double integrate(const std::vector<double>& values, const Grid& g) {
    if (values.size() != g.size())
        throw std::invalid_argument("integrate: sample count does not match grid");
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc * g.cell();
}

double weighted_l1_distance(const std::vector<double>& a, const std::vector<double>& b,
                            const std::vector<double>& w, const Grid& g) {
    if (a.size() != b.size() || a.size() != w.size() || a.size() != g.size())
        throw std::invalid_argument("weighted_l1_distance: length mismatch");
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) acc += std::abs(a[j] - b[j]) * w[j];
    return acc * g.cell();
}

} // namespace useries
