#include "useries/step_function.hpp"

#include <cmath>
#include <stdexcept>

namespace useries {

Interval dyadic_interval(int level, std::int64_t i) {
    if (level < 0) throw std::invalid_argument("dyadic_interval: negative level");
    if (level > 62) throw std::invalid_argument("dyadic_interval: level too deep");
    const std::int64_t cells = std::int64_t{1} << level;
    if (i < 1 || i > cells) throw std::invalid_argument("dyadic_interval: cell index out of range");
    const double w = kTwoPi / static_cast<double>(cells);
    return {w * static_cast<double>(i - 1), w * static_cast<double>(i)};
}

StepFunction::StepFunction(int level, std::vector<Rational> values)
    : level_(level), values_(std::move(values)) {
    if (level < 0 || level > 26)
        throw std::invalid_argument("StepFunction: level out of supported range");
    if (values_.size() != (std::size_t{1} << level))
        throw std::invalid_argument("StepFunction: expected 2^level values");
}

bool StepFunction::is_zero() const {
    for (const auto& v : values_)
        if (!v.is_zero()) return false;
    return true;
}

double StepFunction::eval(double x) const {
    if (x < 0.0 || x >= kTwoPi) throw std::invalid_argument("StepFunction::eval: x outside [0, 2*pi)");
    const double w = kTwoPi / static_cast<double>(values_.size());
    auto cell = static_cast<std::size_t>(x / w);
    // Half-open cells; guard against x/w rounding up to the next boundary.
    if (cell >= values_.size()) cell = values_.size() - 1;
    if (cell + 1 < values_.size() && x >= w * static_cast<double>(cell + 1)) ++cell;
    return values_[cell].value();
}

StepFunction StepFunction::refined_once() const {
    std::vector<Rational> v;
    v.reserve(values_.size() * 2);
    for (const auto& r : values_) { v.push_back(r); v.push_back(r); }
    return StepFunction(level_ + 1, std::move(v));
}

StepFunction StepFunction::refined_to(int level) const {
    if (level < level_) throw std::invalid_argument("refined_to: cannot coarsen");
    StepFunction f = *this;
    while (f.level() < level) f = f.refined_once();
    return f;
}

std::vector<double> StepFunction::sample(const Grid& g) const {
    std::vector<double> out(g.size());
    if (g.log2_points < level_)
        throw std::invalid_argument("StepFunction::sample: grid coarser than step level");
    const std::size_t per_cell = g.size() >> level_;
    std::size_t j = 0;
    for (const auto& r : values_) {
        const double v = r.value();
        for (std::size_t k = 0; k < per_cell; ++k) out[j++] = v;
    }
    return out;
}

double StepFunction::integral_abs() const {
    const double w = kTwoPi / static_cast<double>(values_.size());
    double acc = 0.0;
    for (const auto& r : values_) acc += std::abs(r.value());
    return acc * w;
}

double StepFunction::integral_square() const {
    const double w = kTwoPi / static_cast<double>(values_.size());
    double acc = 0.0;
    for (const auto& r : values_) { const double v = r.value(); acc += v * v; }
    return acc * w;
}

double StepFunction::sup_norm() const {
    double m = 0.0;
    for (const auto& r : values_) m = std::max(m, std::abs(r.value()));
    return m;
}

double eval_step(const StepFunction& f, double x) { return f.eval(x); }

} // namespace useries
