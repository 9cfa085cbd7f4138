#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "useries/lemma.hpp"

namespace useries {

// Budget schedule for the series blocks. The default is the geometric
// 2^{-2(s+1)}; a positive floor relaxes only the truncation budgets (the
// plateau geometry always runs from the geometric value, so the measure
// bounds on E_s are unaffected). best_effort additionally keeps going when a
// block cannot reach its truncation budget, emitting the block with an empty
// band and a recorded shortfall.
struct BuildOptions {
    double budget_floor = 0.0;
    double geometry_floor = 0.0;
    bool best_effort = false;

    static double nominal_budget(int s) { return std::pow(2.0, -2.0 * (s + 1)); }
    double budget(int s) const { return std::max(nominal_budget(s), budget_floor); }
    double geometry(int s) const { return std::max(nominal_budget(s), geometry_floor); }
};

struct SeriesBlock {
    int s = 0;
    StepFunction f;
    IntervalSet E;
    std::vector<CoeffBlock> bands; // one per nonzero piece of f
    long N_prev = 0;               // series band floor N_{s-1}
    long N = 0;                    // series band ceiling N_s (exclusive)
    double budget = 0.0;           // truncation budget this block ran with
    double geometry_epsilon = 0.0; // epsilon the plateau geometry ran with
    double coeff_budget = 0.0;     // measured sum |C|^2 omega(|C|) over the block
    double approx_error_on_E = 0.0; // integral over E_s of |P_s - f_s|
    double complement_measure = 0.0;
    bool ok = true;

    double max_abs_coeff() const;
    double sum_abs_coeff() const;
};

class UniversalSeries {
public:
    int S = 0;
    Modulus omega;
    int grid_log2 = 18;
    std::vector<SeriesBlock> blocks;

    long top_frequency() const { return blocks.empty() ? 1 : blocks.back().N; }
    const SeriesBlock& block(int s) const { return blocks.at(static_cast<std::size_t>(s) - 1); }

    // Coefficient stream view of (the built part of) the series.
    std::complex<double> coefficient(long k) const;
    // The band [N_{s-1}, N_s) that contains |k|, or 0 when beyond depth.
    int band_of(long k) const;

    double cumulative_coeff_budget() const;
};

// Applies the construction to f_s = enumerate_step(s) for s = 1..S with
// budget 2^{-2(s+1)} and chained band floors (N_0 = 1). Throws
// ConstructionError naming the failing s unless opts.best_effort.
UniversalSeries build_universal_series(int S, const Modulus& omega, const Grid& g,
                                       const BuildOptions& opts = {});
// Extends an existing series in place to depth S.
void extend_universal_series(UniversalSeries& series, int S, const Grid& g,
                             const BuildOptions& opts = {});

// sup|f_s| + max over p of sup|partial block sum| + 1, per the weight's
// normalizers. The sup over p is taken on the grid.
double h_normalizer(int s, const UniversalSeries& series, const Grid& g);

struct WeightSpec {
    double epsilon = 0.25;
    int n0 = 0;
    int S = 0;                       // truncation depth the sets were built at
    std::vector<IntervalSet> omega_sets; // Omega_n for n = n0..S
    std::vector<double> h;           // h_1..h_S
    std::vector<double> mu_levels;   // mu_n for n = 1..S
    IntervalSet E;                   // Omega_{n0}
    IntervalSet B;                   // union of the Omega_n = Omega_S
    double truncation_error_bound = 0.0; // tail sum of 2^{-2(s+1)} beyond S

    const IntervalSet& omega_set(int n) const {
        return omega_sets.at(static_cast<std::size_t>(n - n0));
    }
    double mu(int n) const { return mu_levels.at(static_cast<std::size_t>(n) - 1); }
};

int weight_cutoff_n0(double epsilon);

WeightSpec build_weight(const UniversalSeries& series, double epsilon, const Grid& g);

double weight_eval(const WeightSpec& w, double x);
std::vector<double> weight_samples(const WeightSpec& w, const Grid& g);

struct ABReport {
    double measure_mu_not_1 = 0.0;      // exact ring measure
    double truncation_error_bound = 0.0;
    double epsilon = 0.0;
    double cumulative_budget = 0.0;     // sum of block coefficient budgets
    double budget_bound = 1.0 / 3.0;    // sum over s of 2^{-2s}
    double first_band_max_coeff = 0.0;
    double last_band_max_coeff = 0.0;
    bool ok_measure = false;
    bool ok_budget = false;
};

ABReport verify_A_B(const UniversalSeries& series, const WeightSpec& w, const Modulus& omega);

// The three weighted chain bounds, measured per block s >= n0 at every
// band-end cutoff p:
//   off:      integral over [0,2pi] \ Omega_s of |partial| mu   vs (1/3) 2^{-2s}
//   approx:   integral of |P_s - f_s| mu                        vs 2^{-2s}
//   partial:  integral of |partial| mu                          vs integral |f_s| mu + 2^{-2s}
// rhs_strict carries those right-hand sides; rhs_adjusted widens them by the
// truncation budget the block actually ran with, which is what a
// relaxed-budget series can honestly promise.
struct ChainBoundRow {
    int s = 0;
    long p = 0;
    double lhs_off = 0.0, rhs_off_strict = 0.0, rhs_off_adjusted = 0.0;
    double lhs_approx = 0.0, rhs_approx_strict = 0.0, rhs_approx_adjusted = 0.0;
    double lhs_partial = 0.0, rhs_partial_strict = 0.0, rhs_partial_adjusted = 0.0;
    bool ok_strict = false;
    bool ok_adjusted = false;
};

std::vector<ChainBoundRow> verify_chain_bounds(const UniversalSeries& series, const WeightSpec& w,
                                               const Grid& g);

} // namespace useries
