#include "useries/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "useries/fft.hpp"

namespace useries {

namespace {

double reduce_mod_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

long align_up(long v, long alignment) {
    const long q = (v + alignment - 1) / alignment;
    return q * alignment;
}

// Forward DFT of samples scaled to C_k = (1/2pi) integral convention.
std::vector<std::complex<double>> dft_coeffs(const std::vector<double>& samples) {
    std::vector<std::complex<double>> buf(samples.begin(), samples.end());
    fft_forward(buf);
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (auto& c : buf) c *= inv_n;
    return buf;
}

double max_low_band(const std::vector<std::complex<double>>& coeffs, long N_prev) {
    double m = 0.0;
    for (long k = 0; k < N_prev; ++k) m = std::max(m, std::abs(coeffs[static_cast<std::size_t>(k)]));
    return m;
}

// L1 error of the band-limited reconstruction over [N_prev, N) against the
// original samples. This includes everything the band cannot carry: the
// dropped low band and the tail above N.
double band_error(const std::vector<std::complex<double>>& coeffs,
                  const std::vector<double>& samples, long N_prev, long N, const Grid& g) {
    const std::size_t n = g.size();
    std::vector<std::complex<double>> buf(n, {0.0, 0.0});
    for (long k = N_prev; k < N; ++k) {
        const auto c = coeffs[static_cast<std::size_t>(k)];
        buf[static_cast<std::size_t>(k)] = c;
        buf[n - static_cast<std::size_t>(k)] = std::conj(c);
    }
    fft_inverse(buf);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += std::abs(buf[j].real() - samples[j]);
    return acc * g.cell();
}

} // namespace

double spike_eval(double epsilon, double x) {
    // The construction runs with epsilon < 1/2; the profile itself is fine on
    // (0, 1] and the boundary value 1/2 appears in closed-form checks.
    if (epsilon <= 0.0 || epsilon > 1.0)
        throw std::invalid_argument("spike_eval: epsilon must lie in (0, 1]");
    const double r = reduce_mod_2pi(x);
    const double pi = kTwoPi / 2.0;
    if (r >= epsilon * pi / 2.0 && r < 3.0 * epsilon * pi / 2.0) return 1.0 - 2.0 / epsilon;
    return 1.0;
}

std::vector<double> sample_modulated_spike(double epsilon, double gamma, const Interval& cell,
                                           long nu, const Grid& g) {
    const std::size_t n = g.size();
    std::vector<double> out(n, 0.0);
    if (gamma == 0.0) return out;
    const double depth = (1.0 - 2.0 / epsilon) * gamma;
    const double lo_frac = epsilon / 4.0;  // spike starts at fraction eps*pi/2 of 2*pi
    const double hi_frac = 3.0 * epsilon / 4.0;
    const std::size_t jlo = g.index_at_or_above(cell.lo);
    const std::size_t jhi = g.index_at_or_above(cell.hi);
    const auto un = static_cast<unsigned long long>(n);
    const auto unu = static_cast<unsigned long long>(nu);
    for (std::size_t j = jlo; j < jhi; ++j) {
        const unsigned long long phase = (unu * static_cast<unsigned long long>(j)) % un;
        const double frac = static_cast<double>(phase) / static_cast<double>(un);
        out[j] = (frac >= lo_frac && frac < hi_frac) ? depth : gamma;
    }
    return out;
}

int required_refinement_level(const StepFunction& f, double epsilon, double delta) {
    double max_gamma = 0.0;
    for (const auto& v : f.values()) max_gamma = std::max(max_gamma, std::abs(v.value()));
    if (max_gamma == 0.0) return f.level();
    const double rhs = std::min(epsilon / 2.0, delta);
    // (4/eps) * gamma * sqrt(w) < rhs  =>  w < (rhs*eps/(4*gamma))^2
    const double wmax = std::pow(rhs * epsilon / (4.0 * max_gamma), 2.0);
    int level = f.level();
    double w = kTwoPi / static_cast<double>(std::int64_t{1} << std::min(level, 62));
    while (w >= wmax && level < 4000) {
        ++level;
        w *= 0.5;
    }
    return level;
}

StepFunction refine_partition(const StepFunction& f, double epsilon, double delta) {
    const int level = required_refinement_level(f, epsilon, delta);
    if (level > 26) {
        std::ostringstream msg;
        msg << "smallness rule needs dyadic level " << level
            << "; 2^" << level << " cells cannot be materialized";
        throw ConstructionError("(2.4)", msg.str());
    }
    return f.refined_to(level);
}

IntervalSet level_set_E(double epsilon, const Interval& cell, long nu) {
    if (nu <= 0) throw std::invalid_argument("level_set_E: nu must be positive");
    const double pi = kTwoPi / 2.0;
    const double period = kTwoPi / static_cast<double>(nu);
    std::vector<Interval> spikes;
    const auto t0 = static_cast<long long>(std::floor(cell.lo / period)) - 1;
    const auto t1 = static_cast<long long>(std::ceil(cell.hi / period)) + 1;
    for (long long t = t0; t <= t1; ++t) {
        const double a = (static_cast<double>(t) * kTwoPi + epsilon * pi / 2.0) / static_cast<double>(nu);
        const double b = (static_cast<double>(t) * kTwoPi + 3.0 * epsilon * pi / 2.0) / static_cast<double>(nu);
        const double lo = std::max(a, cell.lo);
        const double hi = std::min(b, cell.hi);
        if (lo < hi) spikes.push_back({lo, hi});
    }
    return complement_within(IntervalSet(std::move(spikes)), IntervalSet({cell}));
}

long choose_modulation(double epsilon_geometry, double epsilon_threshold, double gamma,
                       const Interval& cell, long alignment, long nu_min, long N_prev,
                       double floor_budget, const Grid& g, long nu_cap) {
    const long start = std::max(align_up(std::max(nu_min, 1L), alignment), alignment);
    if (gamma == 0.0) return start;

    const double threshold = epsilon_threshold / (16.0 * std::sqrt(static_cast<double>(N_prev)));
    // The grid must resolve the spike: below 8 samples per dip the discrete
    // coefficients are dominated by aliasing and a band can "reconstruct" the
    // samples without approximating the function.
    const auto resolution_cap = static_cast<long>(
        static_cast<double>(g.size()) * epsilon_geometry / (2.0 * 8.0));
    const long hard_cap = std::min({nu_cap, static_cast<long>(g.size() / 4), resolution_cap});
    if (start > hard_cap) {
        std::ostringstream msg;
        msg << "spike narrower than 8 samples per period at every admissible modulation rate "
            << "(need nu <= " << resolution_cap << ", search starts at " << start
            << "): grid 2^" << g.log2_points << " resolution insufficient";
        throw ConstructionError("(2)", msg.str());
    }

    auto admissible = [&](long nu) {
        const auto samples = sample_modulated_spike(epsilon_geometry, gamma, cell, nu, g);
        const auto coeffs = dft_coeffs(samples);
        if (max_low_band(coeffs, N_prev) >= threshold) return false;
        if (floor_budget > 0.0 &&
            band_error(coeffs, samples, N_prev, g.max_frequency(), g) > floor_budget)
            return false;
        return true;
    };

    // Multiplicative climb, then binary descent over alignment multiples.
    long lo_fail = 0;
    long nu = start;
    while (true) {
        if (nu > hard_cap) {
            std::ostringstream msg;
            msg << "no admissible modulation rate: searched aligned nu in [" << start << ", "
                << hard_cap << "], low-band threshold " << threshold << ", floor budget "
                << floor_budget << " (grid 2^" << g.log2_points << ")";
            throw ConstructionError("(2)", msg.str());
        }
        if (admissible(nu)) break;
        lo_fail = nu;
        nu = align_up(nu * 2, alignment);
    }
    long hi_pass = nu;
    while (hi_pass - lo_fail > alignment) {
        const long mid = align_up(lo_fail + (hi_pass - lo_fail) / 2, alignment);
        if (mid <= lo_fail || mid >= hi_pass) break;
        if (mid >= std::max(align_up(std::max(nu_min, 1L), alignment), alignment) && admissible(mid))
            hi_pass = mid;
        else
            lo_fail = mid;
    }
    return hi_pass;
}

std::pair<long, CoeffBlock> choose_truncation(const std::vector<double>& gs_samples,
                                              long N_prev, double budget, const Grid& g,
                                              int piece_ordinal) {
    if (budget <= 0.0) throw std::invalid_argument("choose_truncation: budget must be positive");
    const auto coeffs = dft_coeffs(gs_samples);
    const long cap = g.max_frequency() - 1;

    auto err = [&](long N) { return band_error(coeffs, gs_samples, N_prev, N, g); };

    const double best = err(cap + 1);
    if (best > budget) {
        std::ostringstream msg;
        msg << "piece " << piece_ordinal << ": band [" << N_prev << ", " << (cap + 1)
            << ") reconstructs to L1 error " << best << " > budget " << budget
            << "; the grid (2^" << g.log2_points << ") cannot carry the band this piece needs";
        throw ConstructionError("(2)", msg.str());
    }

    long lo = N_prev, hi = cap + 1; // err(hi) passes, err(lo) is the empty band
    if (err(N_prev + 1) <= budget) {
        hi = N_prev + 1;
    } else {
        while (hi - lo > 1) {
            const long mid = lo + (hi - lo) / 2;
            if (err(mid) <= budget) hi = mid;
            else lo = mid;
        }
    }
    // Local walk-back: err is not exactly monotone near the boundary.
    int steps = 0;
    while (hi > N_prev + 1 && steps < 64 && err(hi - 1) <= budget) { --hi; ++steps; }

    std::vector<HermitianSpectrum::Entry> entries;
    entries.reserve(static_cast<std::size_t>(hi - N_prev));
    for (long k = N_prev; k < hi; ++k)
        entries.push_back({k, coeffs[static_cast<std::size_t>(k)]});
    CoeffBlock block{piece_ordinal, N_prev, hi, HermitianSpectrum(std::move(entries))};
    return {hi, std::move(block)};
}

namespace {

struct PrefixAbs {
    std::vector<double> acc; // acc[j] = sum of |v_0..v_{j-1}|

    explicit PrefixAbs(const std::vector<double>& v) : acc(v.size() + 1, 0.0) {
        for (std::size_t j = 0; j < v.size(); ++j) acc[j + 1] = acc[j] + std::abs(v[j]);
    }
    double over(const IntervalSet& s, const Grid& g) const {
        double m = 0.0;
        for (const auto& p : s.pieces())
            m += acc[g.index_at_or_above(p.hi)] - acc[g.index_at_or_above(p.lo)];
        return m * g.cell();
    }
};

} // namespace

double verify_condition_4(const LemmaOutput& out, const StepFunction& f,
                          const std::vector<IntervalSet>& subsets, const Grid& g,
                          double threshold, int interior_m_per_band, bool exhaustive,
                          int* checks_performed) {
    const PrefixAbs f_prefix(f.sample(g));
    std::vector<double> f_mass(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i) f_mass[i] = f_prefix.over(subsets[i], g);

    double worst = threshold; // empty partial sum: margin is the threshold itself
    int checks = 0;
    auto consider = [&](const std::vector<double>& partial) {
        const PrefixAbs p(partial);
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            worst = std::min(worst, threshold + f_mass[i] - p.over(subsets[i], g));
            ++checks;
        }
    };

    if (out.bands.empty()) {
        if (checks_performed) *checks_performed = static_cast<int>(subsets.size());
        return worst;
    }

    if (!exhaustive) {
        std::vector<long> cutoffs;
        cutoffs.push_back(out.N0);
        for (const auto& b : out.bands) {
            cutoffs.push_back(b.lo);
            cutoffs.push_back(b.hi - 1);
            for (int i = 1; i <= interior_m_per_band; ++i) {
                const long m = b.lo + (b.hi - 1 - b.lo) * i / (interior_m_per_band + 1);
                cutoffs.push_back(m);
            }
        }
        std::sort(cutoffs.begin(), cutoffs.end());
        cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
        for (long m : cutoffs) {
            if (m < out.N0 || m >= out.N) continue;
            consider(eval_partial_sum(out.bands, m, g));
        }
    } else {
        // One rotor sweep over the whole band; the margins only change at
        // supported frequencies, so evaluate exactly there.
        const std::size_t n = g.size();
        std::vector<std::complex<double>> rot(n), base(n);
        for (std::size_t j = 0; j < n; ++j) base[j] = std::polar(1.0, g.x(j));
        std::vector<double> partial(n, 0.0);
        long rot_k = -1;
        for (const auto& band : out.bands)
            for (const auto& e : band.spectrum.entries()) {
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
                for (std::size_t j = 0; j < n; ++j)
                    partial[j] += 2.0 * (e.c * rot[j]).real();
                consider(partial);
            }
    }

    if (checks_performed) *checks_performed = checks;
    return worst;
}

namespace {

LemmaOutput build_at_level(const StepFunction& f, const LemmaParams& params, const Grid& g,
                           int level) {
    const double eps = params.epsilon;
    const double eps_int = eps / 4.0;
    const double eps_b = params.effective_budget_epsilon();
    const double eps_b_int = eps_b / 4.0;

    const StepFunction fr = f.refined_to(level);
    LemmaOutput out;
    out.N0 = params.N0;
    out.report.epsilon_internal = eps_int;
    out.report.budget_epsilon_used = eps_b;
    out.report.level_used = level;

    const long alignment = 1L << level;
    long N_prev = params.N0;
    long nu_prev = 0;
    int ordinal = 0;
    std::vector<Interval> e_pieces_zero;
    IntervalSet E;
    double nonzero_support = 0.0;

    for (std::size_t i = 0; i < fr.cell_count(); ++i) {
        const double gamma = fr.value(i).value();
        const Interval cell = dyadic_interval(level, static_cast<std::int64_t>(i) + 1);
        if (gamma == 0.0) {
            e_pieces_zero.push_back(cell); // g_s vanishes identically: E_s is the whole cell
            continue;
        }
        ++ordinal;
        nonzero_support += cell.length();
        const double budget = eps_b_int / std::pow(2.0, ordinal + 1);

        ModulatedBlock blk;
        blk.s = ordinal;
        blk.gamma = gamma;
        blk.delta = cell;
        blk.budget = budget;
        try {
            blk.nu = choose_modulation(eps_int, eps_b, gamma, cell, alignment, nu_prev + 1,
                                       N_prev, 0.5 * budget, g, params.nu_cap);
            const auto gs = sample_modulated_spike(eps_int, gamma, cell, blk.nu, g);
            auto [N, band] = choose_truncation(gs, N_prev, budget, g, ordinal);
            blk.band_lo = N_prev;
            blk.band_hi = N;
            {
                // Re-measure the accepted band once for the report.
                std::vector<CoeffBlock> one{band};
                const auto recon = eval_partial_sum(one, -1, g);
                double acc = 0.0;
                for (std::size_t j = 0; j < recon.size(); ++j) acc += std::abs(recon[j] - gs[j]);
                blk.achieved = acc * g.cell();
            }
            out.bands.push_back(std::move(band));
            N_prev = N;
        } catch (const ConstructionError& e) {
            if (!params.allow_partial) {
                std::ostringstream msg;
                msg << "piece " << ordinal << " (gamma " << gamma << ", cell [" << cell.lo << ", "
                    << cell.hi << ")): " << e.what();
                throw ConstructionError(e.condition(), msg.str());
            }
            // Best-effort: keep the geometry, emit an empty band.
            blk.nu = std::max(align_up(nu_prev + 1, alignment), alignment);
            blk.band_lo = N_prev;
            blk.band_hi = N_prev + 1;
            const auto gs = sample_modulated_spike(eps_int, gamma, cell, blk.nu, g);
            double acc = 0.0;
            for (double v : gs) acc += std::abs(v);
            blk.achieved = acc * g.cell();
            blk.ok = false;
            out.all_ok = false;
            out.bands.push_back(CoeffBlock{ordinal, N_prev, N_prev + 1, HermitianSpectrum{}});
            N_prev += 1;
        }
        nu_prev = blk.nu;
        E = set_union(E, level_set_E(eps_int, cell, blk.nu));
        out.blocks.push_back(std::move(blk));
    }
    E = set_union(E, IntervalSet(std::move(e_pieces_zero)));
    out.E = std::move(E);
    out.N = N_prev;

    // The plateau sets are exact interval arithmetic; their total measure
    // must match the closed form to rounding.
    const double expect = kTwoPi - (eps_int / 2.0) * nonzero_support;
    if (std::abs(out.E.measure() - expect) > 1e-9)
        throw std::logic_error("build_lemma: plateau measure does not match the closed form");

    auto& rep = out.report;
    rep.margin1 = out.E.measure() - (kTwoPi - eps);
    if (rep.margin1 <= 0.0) {
        std::ostringstream msg;
        msg << "measure(E) = " << out.E.measure() << " <= 2*pi - " << eps;
        throw ConstructionError("(1)", msg.str());
    }

    const auto f_samples = fr.sample(g);
    const auto p_samples = eval_partial_sum(out.bands, -1, g);
    std::vector<double> diff(f_samples.size());
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = std::abs(p_samples[j] - f_samples[j]);
    rep.integral_E_P_minus_f = integrate_on_set(diff, out.E, g);
    rep.margin2 = eps_b - rep.integral_E_P_minus_f;
    if (rep.margin2 <= 0.0 && !params.allow_partial) {
        std::ostringstream msg;
        msg << "integral over E of |P - f| = " << rep.integral_E_P_minus_f << " >= " << eps_b;
        throw ConstructionError("(2)", msg.str());
    }

    rep.coeff_budget = coefficient_budget(out.bands, params.omega);
    rep.coeff_budget_first_power = coefficient_budget_first_power(out.bands, params.omega);
    rep.margin3 = eps_b - rep.coeff_budget;
    for (const auto& b : out.bands) rep.max_coeff = std::max(rep.max_coeff, b.spectrum.max_abs());

    if (rep.margin3 <= 0.0) {
        std::ostringstream msg;
        msg << "coefficient budget " << rep.coeff_budget << " >= " << eps_b << " at dyadic level "
            << level << " (max |C_k| = " << rep.max_coeff << ")";
        throw ConstructionError("(3)", msg.str());
    }

    const auto subsets =
        sample_subsets(out.E, params.subset_count, params.subset_max_pieces, params.subset_seed);
    rep.margin4 = verify_condition_4(out, fr, subsets, g, eps_b, params.interior_m_per_band,
                                     params.exhaustive_m, &rep.condition4_checks);
    if (rep.margin4 <= 0.0 && !params.allow_partial) {
        std::ostringstream msg;
        msg << "worst partial-sum margin " << rep.margin4 << " over " << rep.condition4_checks
            << " subset/cutoff checks";
        throw ConstructionError("(4)", msg.str());
    }
    return out;
}

} // namespace

LemmaOutput build_lemma(const StepFunction& f, const LemmaParams& params, const Grid& g) {
    if (!(params.epsilon > 0.0 && params.epsilon < 0.5))
        throw std::invalid_argument("build_lemma: epsilon must lie in (0, 1/2)");
    if (params.N0 < 1) throw std::invalid_argument("build_lemma: N0 must be >= 1");

    const double eps_int = params.epsilon / 4.0;
    const double f2 = f.integral_square();
    // Zero f makes the eta bound vacuous; any positive eta works.
    const double eta = f2 > 0.0 ? 0.999 * (eps_int * eps_int / 4.0) / f2
                                : params.epsilon * params.epsilon / 4.0;
    const double delta = std::min(0.999 * eps_int, params.omega.inverse_below(0.5 * eta));
    const int level_req = required_refinement_level(f, eps_int, delta);

    if (f.is_zero()) {
        LemmaOutput out;
        out.E = IntervalSet::full_circle();
        out.N0 = params.N0;
        out.N = params.N0 + 1;
        out.report.margin1 = params.epsilon;
        out.report.margin2 = params.effective_budget_epsilon();
        out.report.margin3 = params.effective_budget_epsilon();
        out.report.margin4 = params.effective_budget_epsilon();
        out.report.eta = eta;
        out.report.delta = delta;
        out.report.coeffs_below_delta = true;
        out.report.epsilon_internal = eps_int;
        out.report.budget_epsilon_used = params.effective_budget_epsilon();
        out.report.level_used = f.level();
        out.report.level_required_2_4 = level_req;
        return out;
    }

    // Adaptive refinement: try the function's own level first and deepen only
    // when the measured coefficient budget says so. The closed-form level of
    // the smallness rule is reported alongside; it is sufficient, not
    // necessary, and is usually far beyond what can be materialized.
    std::string last_c3;
    for (int level = f.level(); level <= params.max_refine_level; ++level) {
        try {
            LemmaOutput out = build_at_level(f, params, g, level);
            out.report.eta = eta;
            out.report.delta = delta;
            out.report.level_required_2_4 = level_req;
            out.report.coeffs_below_delta =
                out.report.max_coeff < delta && params.omega(out.report.max_coeff) < eta;
            return out;
        } catch (const ConstructionError& e) {
            if (e.condition() == "(3)" && level < params.max_refine_level) {
                last_c3 = e.what();
                continue; // halving the cells shrinks every coefficient
            }
            if (!last_c3.empty())
                throw ConstructionError(e.condition(),
                                        std::string(e.what()) + " [reached after refining: " +
                                            last_c3 + "]");
            throw;
        }
    }
    throw ConstructionError("(3)", "coefficient budget unsatisfied up to refinement cap: " + last_c3);
}

} // namespace useries
