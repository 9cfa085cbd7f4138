#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "useries/grid.hpp"

namespace useries {

// Finitely supported coefficients C_k of a real-valued trigonometric sum.
// Only k >= 0 is stored; C_{-k} = conj(C_k) is implied, and C_0 is real.
class HermitianSpectrum {
public:
    struct Entry {
        long k;
        std::complex<double> c;
    };

    HermitianSpectrum() = default;
    explicit HermitianSpectrum(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::complex<double> at(long k) const; // signed k; zero off support

    double sum_abs() const;     // sum over both signs of |C_k|
    double sum_square() const;  // sum over both signs of |C_k|^2
    double max_abs() const;

private:
    std::vector<Entry> entries_; // sorted by k, k >= 0, no zero entries
};

// One frequency band [lo, hi) of the construction, holding the coefficients
// produced for a single modulated piece.
struct CoeffBlock {
    int s = 0;     // piece index within its build
    long lo = 1;   // band floor (inclusive)
    long hi = 2;   // band ceiling (exclusive)
    HermitianSpectrum spectrum;
};

// Modulus of the coefficient budget: continuous, nondecreasing on [0, inf),
// omega(+0) = 0. `scale` multiplies the built-ins; any positive scale keeps
// the function admissible.
struct Modulus {
    enum class Kind { Power, LogReciprocal, Table };
    Kind kind = Kind::Power;
    double alpha = 1.0;
    double scale = 1.0;
    std::vector<std::pair<double, double>> table; // sorted knots, linear interp

    double operator()(double t) const;

    static Modulus power(double alpha, double scale = 1.0) {
        return Modulus{Kind::Power, alpha, scale, {}};
    }
    static Modulus log_reciprocal(double scale = 1.0) {
        return Modulus{Kind::LogReciprocal, 1.0, scale, {}};
    }
    static Modulus from_table(std::vector<std::pair<double, double>> knots, double scale = 1.0);

    // Largest t with omega(t) <= target (bisection on monotonicity); used to
    // derive the small-coefficient threshold from an eta bound.
    double inverse_below(double target, double hi = 1.0) const;
};

// Grid DFT of real samples scaled so that C_k matches
// (1/2pi) * integral of values * e^{-ikx}. Keeps |k| <= max_freq.
HermitianSpectrum fourier_coefficients(const std::vector<double>& values, const Grid& g,
                                       long max_freq);

// Same coefficients by direct summation; the slow verification path.
std::complex<double> fourier_coefficient_direct(const std::vector<double>& values, const Grid& g,
                                                long k);

// Real samples of sum over the blocks of C_k e^{ikx} restricted to |k| <= m
// (m < 0 means no truncation). Asserts the imaginary residue stays below
// 1e-9 times the total coefficient mass.
std::vector<double> eval_partial_sum(const std::vector<CoeffBlock>& blocks, long m, const Grid& g);
std::vector<double> eval_spectrum(const HermitianSpectrum& spec, const Grid& g);

// Measured max |imag| of the inverse transform relative to the coefficient
// mass, without asserting; eval_partial_sum enforces 1e-9 internally.
double max_imag_residue_ratio(const std::vector<CoeffBlock>& blocks, long m, const Grid& g);

// Sum over both signs of |C_k|^2 * omega(|C_k|).
double coefficient_budget(const std::vector<CoeffBlock>& blocks, const Modulus& omega);
// First-power variant: diagnostic only, never asserted.
double coefficient_budget_first_power(const std::vector<CoeffBlock>& blocks, const Modulus& omega);

// | sum |C_k|^2 - (1/2pi) * integral values^2 |.
double parseval_defect(const std::vector<double>& values, const HermitianSpectrum& spec,
                       const Grid& g);

} // namespace useries
