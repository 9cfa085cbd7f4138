#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "useries/grid.hpp"
#include "useries/interval_set.hpp"
#include "useries/spectrum.hpp"
#include "useries/step_function.hpp"

namespace useries {

// A construction that cannot meet one of its four output conditions within
// the grid/search caps reports which condition blocked it and why.
class ConstructionError : public std::runtime_error {
public:
    ConstructionError(std::string condition, const std::string& message)
        : std::runtime_error("condition " + condition + ": " + message),
          condition_(std::move(condition)) {}
    const std::string& condition() const { return condition_; }

private:
    std::string condition_;
};

struct LemmaParams {
    double epsilon = 0.1; // in (0, 1/2)
    long N0 = 3;
    Modulus omega = Modulus::power(1.0);

    // Engine knobs. budget_epsilon > epsilon relaxes only the truncation
    // budgets and the (2)/(3)/(4) thresholds; the spike geometry and the
    // measure condition (1) always run from epsilon itself.
    double budget_epsilon = 0.0;      // 0 = use epsilon
    bool allow_partial = false;       // emit empty bands instead of failing (2)
    int max_refine_level = 12;
    long nu_cap = 1L << 21;
    int subset_count = 100;
    int subset_max_pieces = 8;
    std::uint64_t subset_seed = 2026;
    int interior_m_per_band = 8;
    bool exhaustive_m = false;

    double effective_budget_epsilon() const {
        return budget_epsilon > 0.0 ? std::max(epsilon, budget_epsilon) : epsilon;
    }
};

// One modulated piece: gamma_s carried into the band around nu_s by the
// spike profile restricted to the cell delta_s.
struct ModulatedBlock {
    int s = 0;             // nonzero-piece ordinal, 1-based
    double gamma = 0.0;
    Interval delta;
    long nu = 0;
    long band_lo = 0;      // == N_{s-1}
    long band_hi = 0;      // == N_s (exclusive)
    double budget = 0.0;   // per-piece L1 budget
    double achieved = 0.0; // measured L1 band reconstruction error
    bool ok = true;        // false only in allow_partial mode
};

struct ConditionReport {
    double margin1 = 0.0; // measure(E) - (2pi - epsilon)
    double margin2 = 0.0; // budget - integral over E of |P - f|
    double margin3 = 0.0; // budget - coefficient budget
    double margin4 = 0.0; // worst partial-sum margin over subsets and m
    double integral_E_P_minus_f = 0.0;
    double coeff_budget = 0.0;
    double coeff_budget_first_power = 0.0; // diagnostic, never asserted
    double max_coeff = 0.0;
    // Sufficient-condition parameter chain (eta, delta), reported next to
    // the adaptive choices actually used.
    double eta = 0.0;
    double delta = 0.0;
    bool coeffs_below_delta = false;
    double epsilon_internal = 0.0;
    double budget_epsilon_used = 0.0;
    int level_used = 0;
    int level_required_2_4 = 0;
    int condition4_checks = 0;
};

struct LemmaOutput {
    IntervalSet E;
    std::vector<ModulatedBlock> blocks;
    std::vector<CoeffBlock> bands;
    long N0 = 0;
    long N = 0; // top of the last band (exclusive)
    ConditionReport report;
    bool all_ok = true; // false when allow_partial left gaps
};

// The two-valued mean-zero profile: 1 off [eps*pi/2, 3*eps*pi/2), 1 - 2/eps
// on it, extended 2*pi-periodically.
double spike_eval(double epsilon, double x);

// Samples of gamma * spike(nu*x) restricted to the cell, computed with exact
// integer phase arithmetic (nu*j mod n), so the spike edges land identically
// for equal (nu mod n) regardless of magnitude.
std::vector<double> sample_modulated_spike(double epsilon, double gamma, const Interval& cell,
                                           long nu, const Grid& g);

// Smallest dyadic level at which every piece satisfies the smallness rule
// (4/eps)*|gamma|*sqrt(|cell|) < min(eps/2, delta).
int required_refinement_level(const StepFunction& f, double epsilon, double delta);

// f re-expressed at that level (values unchanged pointwise). Throws
// ConstructionError when the level is beyond what can be materialized.
StepFunction refine_partition(const StepFunction& f, double epsilon, double delta);

// Exact plateau set {x in cell : gamma*spike(nu*x) == gamma}.
IntervalSet level_set_E(double epsilon, const Interval& cell, long nu);

// Smallest nu >= nu_min, multiple of `alignment`, whose low band satisfies
// |C_k| < epsilon_threshold/(16*sqrt(N_prev)) for all |k| < N_prev; when
// floor_budget is positive the full-spectrum band reconstruction error must
// also come under it (the low-band mass that the band [N_prev, cap) can
// never recover must leave room for the truncation budget). The spike
// geometry itself runs from epsilon_geometry.
long choose_modulation(double epsilon_geometry, double epsilon_threshold, double gamma,
                       const Interval& cell, long alignment, long nu_min, long N_prev,
                       double floor_budget, const Grid& g, long nu_cap);

// Smallest N > N_prev with integral |reconstruction over [N_prev, N) - g_s|
// < budget, plus the emitted band.
std::pair<long, CoeffBlock> choose_truncation(const std::vector<double>& gs_samples,
                                              long N_prev, double budget, const Grid& g,
                                              int piece_ordinal);

LemmaOutput build_lemma(const StepFunction& f, const LemmaParams& params, const Grid& g);

// Worst margin of condition (4) over the given subsets of E and the swept
// partial-sum cutoffs; positive means the condition holds everywhere tested.
double verify_condition_4(const LemmaOutput& out, const StepFunction& f,
                          const std::vector<IntervalSet>& subsets, const Grid& g,
                          double threshold, int interior_m_per_band, bool exhaustive,
                          int* checks_performed = nullptr);

} // namespace useries
