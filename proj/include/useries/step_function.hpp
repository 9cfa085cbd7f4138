#pragma once

#include <vector>

#include "useries/grid.hpp"
#include "useries/interval_set.hpp"
#include "useries/rational.hpp"

namespace useries {

// The i-th cell (1-based) of the 2^m-fold uniform dyadic partition of
// [0, 2*pi): [2*pi*(i-1)/2^m, 2*pi*i/2^m).
Interval dyadic_interval(int level, std::int64_t i);

// Piecewise-constant function on the dyadic partition at a fixed level, with
// exact rational values (one per cell).
class StepFunction {
public:
    StepFunction() : level_(0), values_(1) {}
    StepFunction(int level, std::vector<Rational> values);

    static StepFunction zero(int level = 0) {
        return StepFunction(level, std::vector<Rational>(std::size_t{1} << level));
    }
    static StepFunction constant(Rational c) { return StepFunction(0, {c}); }

    int level() const { return level_; }
    std::size_t cell_count() const { return values_.size(); }
    const std::vector<Rational>& values() const { return values_; }
    const Rational& value(std::size_t cell) const { return values_[cell]; }

    bool is_zero() const;
    // Value on the half-open cell containing x; x must lie in [0, 2*pi).
    double eval(double x) const;

    // Same function one dyadic level deeper (each value duplicated).
    StepFunction refined_once() const;
    StepFunction refined_to(int level) const;

    std::vector<double> sample(const Grid& g) const;

    // Exact integrals from the step data: sum gamma_i * |cell| etc.
    double integral_abs() const;
    double integral_square() const;
    double sup_norm() const;

    friend bool operator==(const StepFunction& a, const StepFunction& b) {
        return a.level_ == b.level_ && a.values_ == b.values_;
    }

private:
    int level_;
    std::vector<Rational> values_;
};

double eval_step(const StepFunction& f, double x);

} // namespace useries
