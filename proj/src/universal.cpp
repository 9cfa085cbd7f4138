#include "useries/universal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "useries/enumeration.hpp"

namespace useries {

double SeriesBlock::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& b : bands) m = std::max(m, b.spectrum.max_abs());
    return m;
}

double SeriesBlock::sum_abs_coeff() const {
    double m = 0.0;
    for (const auto& b : bands) m += b.spectrum.sum_abs();
    return m;
}

std::complex<double> UniversalSeries::coefficient(long k) const {
    const long kk = k < 0 ? -k : k;
    for (const auto& blk : blocks) {
        if (kk < blk.N_prev || kk >= blk.N) continue;
        for (const auto& band : blk.bands) {
            if (kk < band.lo || kk >= band.hi) continue;
            return band.spectrum.at(k);
        }
        return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

int UniversalSeries::band_of(long k) const {
    const long kk = k < 0 ? -k : k;
    for (const auto& blk : blocks)
        if (kk >= blk.N_prev && kk < blk.N) return blk.s;
    return 0;
}

double UniversalSeries::cumulative_coeff_budget() const {
    double acc = 0.0;
    for (const auto& blk : blocks) acc += blk.coeff_budget;
    return acc;
}

namespace {

SeriesBlock build_block(int s, long N_prev, const Modulus& omega, const Grid& g,
                        const BuildOptions& opts) {
    SeriesBlock blk;
    blk.s = s;
    blk.f = enumerate_step(static_cast<std::uint64_t>(s));
    blk.N_prev = N_prev;
    blk.budget = opts.budget(s);
    blk.geometry_epsilon = opts.geometry(s);

    LemmaParams params;
    params.epsilon = opts.geometry(s);
    params.budget_epsilon = opts.budget(s);
    params.N0 = N_prev;
    params.omega = omega;
    params.allow_partial = opts.best_effort;
    // The series assembly dominates runtime; keep the per-block subset family
    // small and leave the wide sweep to the dedicated verification calls.
    params.subset_count = 16;
    params.subset_seed = 97 + static_cast<std::uint64_t>(s);

    LemmaOutput out = build_lemma(blk.f, params, g);
    blk.E = std::move(out.E);
    blk.bands = std::move(out.bands);
    blk.N = std::max(out.N, N_prev + 1);
    blk.coeff_budget = coefficient_budget(blk.bands, omega);
    blk.approx_error_on_E = out.report.integral_E_P_minus_f;
    blk.complement_measure = kTwoPi - blk.E.measure();
    blk.ok = out.all_ok;
    return blk;
}

void check_block_invariants(const SeriesBlock& blk) {
    if (blk.complement_measure >= blk.geometry_epsilon)
        throw std::logic_error("series block: plateau complement exceeds its geometry epsilon");
    if (blk.ok && blk.coeff_budget >= std::max(std::pow(2.0, -2.0 * blk.s), 4.0 * blk.budget))
        throw std::logic_error("series block: coefficient budget exceeds its bound");
}

} // namespace

UniversalSeries build_universal_series(int S, const Modulus& omega, const Grid& g,
                                       const BuildOptions& opts) {
    if (S < 1) throw std::invalid_argument("build_universal_series: S must be >= 1");
    UniversalSeries series;
    series.S = 0;
    series.omega = omega;
    series.grid_log2 = g.log2_points;
    extend_universal_series(series, S, g, opts);
    return series;
}

void extend_universal_series(UniversalSeries& series, int S, const Grid& g,
                             const BuildOptions& opts) {
    if (g.log2_points != series.grid_log2 && series.S > 0)
        throw std::invalid_argument("extend_universal_series: grid must match the series");
    long N_prev = series.blocks.empty() ? 1 : series.blocks.back().N;
    for (int s = series.S + 1; s <= S; ++s) {
        SeriesBlock blk;
        try {
            blk = build_block(s, N_prev, series.omega, g, opts);
        } catch (const ConstructionError& e) {
            std::ostringstream msg;
            msg << "series block s = " << s << ": " << e.what();
            throw ConstructionError(e.condition(), msg.str());
        }
        check_block_invariants(blk);
        if (blk.N <= blk.N_prev) throw std::logic_error("series bands must strictly increase");
        N_prev = blk.N;
        series.blocks.push_back(std::move(blk));
        series.S = s;
    }
}

double h_normalizer(int s, const UniversalSeries& series, const Grid& g) {
    const SeriesBlock& blk = series.block(s);
    double sup_partial = 0.0;

    // Running sup over every cutoff p in [N_{s-1}, N_s): advance through the
    // band's support with phase rotors (an FFT per p would not be affordable
    // for wide bands). The partial sum only changes at supported k, and stays
    // fixed beyond the last entry, so those are the only cutoffs evaluated.
    std::vector<HermitianSpectrum::Entry> support;
    for (const auto& band : blk.bands)
        for (const auto& e : band.spectrum.entries()) support.push_back(e);
    if (!support.empty()) {
        const std::size_t n = g.size();
        std::vector<std::complex<double>> rot(n), base(n);
        for (std::size_t j = 0; j < n; ++j) base[j] = std::polar(1.0, g.x(j));
        std::vector<double> partial(n, 0.0);
        long rot_k = -1;
        for (const auto& e : support) {
            if (rot_k < 0 || e.k - rot_k > 8) {
                for (std::size_t j = 0; j < n; ++j)
                    rot[j] = std::polar(1.0, static_cast<double>(e.k) * g.x(j));
            } else {
                while (rot_k < e.k) {
                    for (std::size_t j = 0; j < n; ++j) rot[j] *= base[j];
                    ++rot_k;
                }
            }
            rot_k = e.k;
            double m = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                partial[j] += 2.0 * (e.c * rot[j]).real();
                m = std::max(m, std::abs(partial[j]));
            }
            sup_partial = std::max(sup_partial, m);
        }
    }
    return blk.f.sup_norm() + sup_partial + 1.0;
}

int weight_cutoff_n0(double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("weight_cutoff_n0: epsilon must be positive");
    // floor(log_{1/2} eps) + 1, with a snap so exact powers of 1/2 stay exact.
    const double l = std::log2(1.0 / epsilon);
    const double r = std::round(l);
    const double fl = (std::abs(l - r) < 1e-12) ? r : std::floor(l);
    return static_cast<int>(fl) + 1;
}

WeightSpec build_weight(const UniversalSeries& series, double epsilon, const Grid& g) {
    WeightSpec w;
    w.epsilon = epsilon;
    w.n0 = weight_cutoff_n0(epsilon);
    w.S = series.S;
    if (w.n0 < 1)
        throw std::invalid_argument("build_weight: epsilon >= 1 leaves no cutoff level");
    if (series.S <= w.n0) {
        std::ostringstream msg;
        msg << "series depth S = " << series.S << " does not exceed n0 = " << w.n0;
        throw std::invalid_argument(msg.str());
    }

    // Omega_n = intersection of E_s for s = n..S, by suffix sweep.
    std::vector<IntervalSet> suffix(static_cast<std::size_t>(series.S) + 1);
    suffix[static_cast<std::size_t>(series.S)] = series.block(series.S).E;
    for (int s = series.S - 1; s >= 1; --s)
        suffix[static_cast<std::size_t>(s)] = intersect(series.block(s).E, suffix[static_cast<std::size_t>(s) + 1]);
    for (int n = w.n0; n <= series.S; ++n)
        w.omega_sets.push_back(suffix[static_cast<std::size_t>(n)]);
    w.E = w.omega_sets.front();
    w.B = w.omega_sets.back();

    w.h.resize(static_cast<std::size_t>(series.S));
    for (int s = 1; s <= series.S; ++s)
        w.h[static_cast<std::size_t>(s) - 1] = h_normalizer(s, series, g);

    w.mu_levels.resize(static_cast<std::size_t>(series.S));
    double prod = 1.0;
    for (int n = 1; n <= series.S; ++n) {
        prod *= w.h[static_cast<std::size_t>(n) - 1];
        w.mu_levels[static_cast<std::size_t>(n) - 1] = 1.0 / (std::pow(2.0, 2.0 * n) * prod);
    }

    w.truncation_error_bound = 0.0;
    for (int s = series.S + 1; s <= series.S + 64; ++s)
        w.truncation_error_bound += BuildOptions::nominal_budget(s);

    // Property (A): 0 < mu <= 1 and the off-plateau part is small.
    const double not_one = complement_within(w.E, w.B).measure();
    if (not_one + w.truncation_error_bound >= epsilon) {
        std::ostringstream msg;
        msg << "measure({mu != 1}) = " << not_one << " (+" << w.truncation_error_bound
            << " truncation bound) is not below epsilon = " << epsilon;
        throw ConstructionError("(A)", msg.str());
    }
    return w;
}

double weight_eval(const WeightSpec& w, double x) {
    if (!w.B.contains(x)) return 1.0; // outside every Omega_n
    if (w.E.contains(x)) return 1.0;  // Omega_{n0}
    // x sits in Omega_n \ Omega_{n-1} for the smallest n > n0 containing it.
    for (int n = w.n0 + 1; n <= w.S; ++n)
        if (w.omega_set(n).contains(x)) return w.mu(n);
    return 1.0; // unreachable: x in B means some Omega_n contains it
}

std::vector<double> weight_samples(const WeightSpec& w, const Grid& g) {
    std::vector<double> mu(g.size(), 1.0);
    // The rings Omega_n \ Omega_{n-1} are pairwise disjoint and exclude E, so
    // painting them over the all-ones background realizes the weight exactly.
    for (int n = w.n0 + 1; n <= w.S; ++n) {
        const double v = w.mu(n);
        const IntervalSet ring = complement_within(w.omega_set(n - 1), w.omega_set(n));
        for (const auto& p : ring.pieces()) {
            const std::size_t jlo = g.index_at_or_above(p.lo);
            const std::size_t jhi = g.index_at_or_above(p.hi);
            for (std::size_t j = jlo; j < jhi; ++j) mu[j] = v;
        }
    }
    return mu;
}

ABReport verify_A_B(const UniversalSeries& series, const WeightSpec& w, const Modulus& omega) {
    ABReport rep;
    rep.epsilon = w.epsilon;
    rep.measure_mu_not_1 = complement_within(w.E, w.B).measure();
    rep.truncation_error_bound = w.truncation_error_bound;
    rep.ok_measure = rep.measure_mu_not_1 + rep.truncation_error_bound < w.epsilon;

    rep.cumulative_budget = 0.0;
    rep.budget_bound = 0.0;
    for (const auto& blk : series.blocks) {
        rep.cumulative_budget += coefficient_budget(blk.bands, omega);
        rep.budget_bound += std::pow(2.0, -2.0 * blk.s);
    }
    rep.ok_budget = rep.cumulative_budget < rep.budget_bound;

    if (!series.blocks.empty()) {
        rep.first_band_max_coeff = series.blocks.front().max_abs_coeff();
        rep.last_band_max_coeff = series.blocks.back().max_abs_coeff();
    }
    return rep;
}

std::vector<ChainBoundRow> verify_chain_bounds(const UniversalSeries& series, const WeightSpec& w,
                                               const Grid& g) {
    std::vector<ChainBoundRow> rows;
    const auto mu = weight_samples(w, g);

    auto weighted_mass = [&](const std::vector<double>& v, const IntervalSet* set) {
        std::vector<double> prod(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) prod[j] = std::abs(v[j]) * mu[j];
        return set ? integrate_on_set(prod, *set, g) : integrate(prod, g);
    };

    for (int s = w.n0; s <= series.S; ++s) {
        const SeriesBlock& blk = series.block(s);
        const double pow_2s = std::pow(2.0, -2.0 * s);
        const IntervalSet omega_s = w.omega_set(std::max(s, w.n0));
        const IntervalSet off = complement_within(omega_s, IntervalSet::full_circle());

        const auto f_samples = blk.f.sample(g);
        const double f_mass = weighted_mass(f_samples, nullptr);

        const auto p_full = eval_partial_sum(blk.bands, -1, g);
        std::vector<double> diff(p_full.size());
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = p_full[j] - f_samples[j];
        const double approx = weighted_mass(diff, nullptr);

        std::vector<long> cutoffs;
        for (const auto& band : blk.bands) cutoffs.push_back(band.hi - 1);
        if (cutoffs.empty()) cutoffs.push_back(blk.N - 1);

        for (long p : cutoffs) {
            ChainBoundRow row;
            row.s = s;
            row.p = p;
            const auto partial = eval_partial_sum(blk.bands, p, g);
            double max_mag = 0.0;
            for (double v : partial) max_mag = std::max(max_mag, std::abs(v));
            const double tol_num = 10.0 * g.cell() * std::max(max_mag, blk.f.sup_norm());

            row.lhs_off = weighted_mass(partial, &off);
            row.rhs_off_strict = pow_2s / 3.0 + tol_num;
            row.rhs_off_adjusted = row.rhs_off_strict + blk.budget;

            row.lhs_approx = approx;
            row.rhs_approx_strict = pow_2s + tol_num;
            row.rhs_approx_adjusted = row.rhs_approx_strict + blk.budget;

            row.lhs_partial = weighted_mass(partial, nullptr);
            row.rhs_partial_strict = f_mass + pow_2s + tol_num;
            row.rhs_partial_adjusted = row.rhs_partial_strict + 2.0 * blk.budget;

            row.ok_strict = row.lhs_off < row.rhs_off_strict && row.lhs_approx < row.rhs_approx_strict &&
                          row.lhs_partial < row.rhs_partial_strict;
            row.ok_adjusted = row.lhs_off < row.rhs_off_adjusted &&
                              row.lhs_approx < row.rhs_approx_adjusted &&
                              row.lhs_partial < row.rhs_partial_adjusted;
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace useries
