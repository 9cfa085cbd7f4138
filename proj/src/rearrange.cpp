#include "useries/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "useries/enumeration.hpp"

namespace useries {

namespace {

double weighted_distance(const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<double>& mu, const Grid& g) {
    return weighted_l1_distance(a, b, mu, g);
}

std::vector<double> residual(const RearrangeState& state, const Target& target) {
    std::vector<double> r(target.samples.size());
    if (state.partial_sum.empty()) return target.samples;
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = target.samples[j] - state.partial_sum[j];
    return r;
}

} // namespace

int pick_approximant(const RearrangeState& state, const Target& target,
                     const UniversalSeries& series, const WeightSpec& w,
                     const std::vector<double>& mu, const Grid& g) {
    const int q = state.q + 1;
    const double need = std::pow(2.0, -2.0 * q);
    long lower = 0;
    if (!state.chosen_nu.empty()) lower = state.chosen_nu.back();
    if (!state.chosen_m.empty()) lower = std::max(lower, state.chosen_m.back());
    if (q == 1) lower = std::max(lower, static_cast<long>(w.n0 + 1));

    const auto res = residual(state, target);
    for (int nu = static_cast<int>(lower) + 1; nu <= series.S; ++nu) {
        const SeriesBlock& blk = series.block(nu);
        if (!blk.ok) continue; // band never reached its budget; unusable for the induction
        const auto f_samples = blk.f.sample(g);
        if (weighted_distance(res, f_samples, mu, g) < need) return nu;
    }
    std::ostringstream msg;
    msg << "round " << q << ": no enumerated approximant within " << need
        << " of the residual at indices (" << lower << ", " << series.S << "]";
    throw ConstructionError("depth", msg.str());
}

long pick_filler_index(const RearrangeState& state, const UniversalSeries& series) {
    std::vector<std::pair<long, long>> blocked;
    for (int nu : state.chosen_nu) {
        const SeriesBlock& blk = series.block(nu);
        blocked.emplace_back(blk.N_prev, blk.N);
    }
    for (long m = 1;; ++m) {
        if (state.used_freqs.contains(m)) continue;
        bool in_band = false;
        for (const auto& [lo, hi] : blocked)
            if (m >= lo && m < hi) { in_band = true; break; }
        if (!in_band) return m;
    }
}

void rearrange_step(RearrangeState& state, const Target& target, const UniversalSeries& series,
                    const WeightSpec& w, const std::vector<double>& mu, const Grid& g) {
    const int nu = pick_approximant(state, target, series, w, mu, g);
    const SeriesBlock& blk = series.block(nu);
    const int q = state.q + 1;

    if (state.partial_sum.empty()) state.partial_sum.assign(g.size(), 0.0);

    // The whole band range [N_{s-1}, N_s), ascending frequency, each
    // Hermitian pair atomic. Zero coefficients are emitted too: they are
    // members of the series, and the permutation must cover them.
    {
        bool any = false;
        for (const auto& band : blk.bands)
            if (!band.spectrum.empty()) any = true;
        if (any) {
            const auto block_samples = eval_partial_sum(blk.bands, -1, g);
            for (std::size_t j = 0; j < state.partial_sum.size(); ++j)
                state.partial_sum[j] += block_samples[j];
        }
        for (long k = blk.N_prev; k < blk.N; ++k) {
            const std::complex<double> c = series.coefficient(k);
            state.emitted.emissions.push_back({k, c});
            state.emitted.emissions.push_back({-k, std::conj(c)});
            if (!state.used_freqs.insert(k).second)
                throw std::logic_error("rearrange_step: duplicate frequency emitted");
        }
    }
    state.chosen_nu.push_back(nu);

    const long m = pick_filler_index(state, series);
    const std::complex<double> cm = series.coefficient(m);
    state.emitted.emissions.push_back({m, cm});
    state.emitted.emissions.push_back({-m, std::conj(cm)});
    if (!state.used_freqs.insert(m).second)
        throw std::logic_error("rearrange_step: filler frequency already used");
    state.chosen_m.push_back(m);
    if (cm != std::complex<double>(0.0, 0.0)) {
        for (std::size_t j = 0; j < state.partial_sum.size(); ++j) {
            const double ang = static_cast<double>(m) * g.x(j);
            state.partial_sum[j] += 2.0 * (cm * std::complex<double>(std::cos(ang), std::sin(ang))).real();
        }
    }

    const double err = weighted_distance(state.partial_sum, target.samples, mu, g);
    double max_mag = 0.0;
    for (std::size_t j = 0; j < state.partial_sum.size(); ++j)
        max_mag = std::max(max_mag, std::abs(state.partial_sum[j] - target.samples[j]));
    const double tol_num = 10.0 * g.cell() * max_mag;
    const double bound = 2.0 * std::pow(2.0, -2.0 * q) + kTwoPi * std::abs(cm) + tol_num;
    if (err >= bound) {
        std::ostringstream msg;
        msg << "round " << q << ": weighted error " << err << " violates the bound " << bound
            << " (|C_m| = " << std::abs(cm) << ", tol_num = " << tol_num << ")";
        throw std::logic_error(msg.str());
    }
    state.error_curve.push_back(err);
    state.bound_curve.push_back(bound);
    state.q = q;
}

RearrangeResult rearrange_run(const Target& target, UniversalSeries& series, const WeightSpec& w,
                              const Grid& g, double tol, int max_q,
                              const std::function<bool(UniversalSeries&, int)>& deepen) {
    if (target.samples.size() != g.size())
        throw std::invalid_argument("rearrange_run: target samples do not match grid");
    const auto mu = weight_samples(w, g);
    RearrangeState state;
    RearrangeResult result;
    for (int q = 1; q <= max_q; ++q) {
        while (true) {
            try {
                rearrange_step(state, target, series, w, mu, g);
                break;
            } catch (const ConstructionError& e) {
                if (e.condition() == "depth" && deepen && deepen(series, series.S))
                    continue; // deeper series, retry the round
                throw;
            }
        }
        if (state.error_curve.back() < tol) {
            result.converged = true;
            break;
        }
    }
    result.series = std::move(state.emitted);
    result.error_curve = std::move(state.error_curve);
    result.bound_curve = std::move(state.bound_curve);
    result.chosen_nu = std::move(state.chosen_nu);
    result.chosen_m = std::move(state.chosen_m);
    if (!result.converged && !result.error_curve.empty())
        result.converged = result.error_curve.back() < tol;
    return result;
}

} // namespace useries
