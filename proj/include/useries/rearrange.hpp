#pragma once

#include <complex>
#include <functional>
#include <unordered_set>
#include <vector>

#include "useries/universal.hpp"

namespace useries {

struct Target {
    std::vector<double> samples;
};

// One emitted series member. Hermitian pairs are emitted atomically (+k
// immediately followed by -k) so every partial sum is real.
struct Emission {
    long k = 0;
    std::complex<double> c;
};

struct PermutedSeries {
    std::vector<Emission> emissions;
};

struct RearrangeState {
    int q = 0;
    std::unordered_set<long> used_freqs; // positive frequencies emitted so far
    std::vector<int> chosen_nu;
    std::vector<long> chosen_m;
    std::vector<double> partial_sum;
    std::vector<double> error_curve; // weighted L1 distance to target after each round
    std::vector<double> bound_curve; // 2*2^{-2q} + 2pi*|C_{m_q}| + tol_num
    PermutedSeries emitted;
};

// Smallest enumeration index nu > max(previous nu, previous filler, and for
// the first round the weight cutoff n0 + 1) whose step function approximates
// the current residual within 2^{-2q} in the weighted metric. Blocks whose
// band never reached its truncation budget are not eligible. Throws
// ConstructionError("depth", ...) when the built depth is exhausted.
int pick_approximant(const RearrangeState& state, const Target& target,
                     const UniversalSeries& series, const WeightSpec& w,
                     const std::vector<double>& mu, const Grid& g);

// Minimal positive frequency outside every chosen block's band and every
// frequency emitted so far.
long pick_filler_index(const RearrangeState& state, const UniversalSeries& series);

// One induction round: block nu_q (all band terms, ascending k, pairs
// atomic), then the filler pair at m_q; asserts the per-round bound.
void rearrange_step(RearrangeState& state, const Target& target, const UniversalSeries& series,
                    const WeightSpec& w, const std::vector<double>& mu, const Grid& g);

struct RearrangeResult {
    PermutedSeries series;
    std::vector<double> error_curve;
    std::vector<double> bound_curve;
    std::vector<int> chosen_nu;
    std::vector<long> chosen_m;
    bool converged = false;
};

// Rounds until the weighted error drops under tol or max_q is reached. When
// a deepen callback is supplied, a depth-exhausted pick retries after the
// callback extends the series.
RearrangeResult rearrange_run(const Target& target, UniversalSeries& series, const WeightSpec& w,
                              const Grid& g, double tol, int max_q,
                              const std::function<bool(UniversalSeries&, int)>& deepen = {});

} // namespace useries
