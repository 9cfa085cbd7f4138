#include "useries/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace useries {

json to_json(const IntervalSet& s) {
    json j = json::array();
    for (const auto& p : s.pieces()) j.push_back({p.lo, p.hi});
    return j;
}

IntervalSet interval_set_from_json(const json& j) {
    std::vector<Interval> pieces;
    for (const auto& e : j) pieces.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
    return IntervalSet(std::move(pieces));
}

json to_json(const StepFunction& f) {
    json values = json::array();
    for (const auto& v : f.values()) values.push_back({v.num, v.den});
    return json{{"level", f.level()}, {"values", values}};
}

StepFunction step_function_from_json(const json& j) {
    std::vector<Rational> values;
    for (const auto& e : j.at("values"))
        values.emplace_back(e.at(0).get<std::int64_t>(), e.at(1).get<std::int64_t>());
    return StepFunction(j.at("level").get<int>(), std::move(values));
}

json to_json(const Modulus& m) {
    json j{{"scale", m.scale}};
    switch (m.kind) {
        case Modulus::Kind::Power:
            j["kind"] = "power";
            j["alpha"] = m.alpha;
            break;
        case Modulus::Kind::LogReciprocal:
            j["kind"] = "log_reciprocal";
            break;
        case Modulus::Kind::Table: {
            j["kind"] = "table";
            json t = json::array();
            for (const auto& [x, w] : m.table) t.push_back({x, w});
            j["table"] = t;
            break;
        }
    }
    return j;
}

Modulus modulus_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double scale = j.value("scale", 1.0);
    if (kind == "power") return Modulus::power(j.at("alpha").get<double>(), scale);
    if (kind == "log_reciprocal") return Modulus::log_reciprocal(scale);
    if (kind == "table") {
        std::vector<std::pair<double, double>> knots;
        for (const auto& e : j.at("table"))
            knots.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        return Modulus::from_table(std::move(knots), scale);
    }
    throw std::invalid_argument("modulus_from_json: unknown kind '" + kind + "'");
}

json to_json(const std::vector<CoeffBlock>& bands) {
    json arr = json::array();
    for (const auto& b : bands) {
        json coeffs = json::array();
        for (const auto& e : b.spectrum.entries())
            coeffs.push_back({e.k, e.c.real(), e.c.imag()});
        arr.push_back({{"s", b.s}, {"lo", b.lo}, {"hi", b.hi}, {"coeffs", coeffs}});
    }
    return json{{"bands", arr}};
}

std::vector<CoeffBlock> bands_from_json(const json& j) {
    std::vector<CoeffBlock> bands;
    for (const auto& e : j.at("bands")) {
        std::vector<HermitianSpectrum::Entry> entries;
        for (const auto& c : e.at("coeffs"))
            entries.push_back({c.at(0).get<long>(),
                               {c.at(1).get<double>(), c.at(2).get<double>()}});
        bands.push_back({e.at("s").get<int>(), e.at("lo").get<long>(), e.at("hi").get<long>(),
                         HermitianSpectrum(std::move(entries))});
    }
    return bands;
}

json to_json(const LemmaOutput& out, const LemmaParams& params, const StepFunction& f,
             int grid_log2) {
    json blocks = json::array();
    for (const auto& b : out.blocks)
        blocks.push_back({{"s", b.s},
                          {"gamma", b.gamma},
                          {"delta", {b.delta.lo, b.delta.hi}},
                          {"nu", b.nu},
                          {"band", {b.band_lo, b.band_hi}},
                          {"budget", b.budget},
                          {"achieved", b.achieved},
                          {"ok", b.ok}});
    const auto& r = out.report;
    return json{
        {"kind", "lemma_output"},
        {"grid_log2", grid_log2},
        {"epsilon", params.epsilon},
        {"budget_epsilon", r.budget_epsilon_used},
        {"N0", out.N0},
        {"N", out.N},
        {"omega", to_json(params.omega)},
        {"step_function", to_json(f)},
        {"E", to_json(out.E)},
        {"blocks", blocks},
        {"spectrum", to_json(out.bands)},
        {"margins",
         {{"condition1", r.margin1},
          {"condition2", r.margin2},
          {"condition3", r.margin3},
          {"condition4", r.margin4},
          {"integral_E_P_minus_f", r.integral_E_P_minus_f},
          {"coeff_budget", r.coeff_budget},
          {"coeff_budget_first_power", r.coeff_budget_first_power},
          {"condition4_checks", r.condition4_checks}}},
        {"params",
         {{"eta", r.eta},
          {"delta", r.delta},
          {"epsilon_internal", r.epsilon_internal},
          {"level_used", r.level_used},
          {"level_required_2_4", r.level_required_2_4},
          {"max_coeff", r.max_coeff},
          {"coeffs_below_delta", r.coeffs_below_delta},
          {"subset_seed", params.subset_seed},
          {"subset_count", params.subset_count}}},
        {"all_ok", out.all_ok}};
}

json to_json(const UniversalSeries& series) {
    json blocks = json::array();
    for (const auto& b : series.blocks)
        blocks.push_back({{"s", b.s},
                          {"f", to_json(b.f)},
                          {"E", to_json(b.E)},
                          {"N_prev", b.N_prev},
                          {"N", b.N},
                          {"budget", b.budget},
                          {"geometry_epsilon", b.geometry_epsilon},
                          {"coeff_budget", b.coeff_budget},
                          {"approx_error_on_E", b.approx_error_on_E},
                          {"complement_measure", b.complement_measure},
                          {"ok", b.ok},
                          {"spectrum", to_json(b.bands)}});
    return json{{"kind", "universal_series"},
                {"S", series.S},
                {"grid_log2", series.grid_log2},
                {"omega", to_json(series.omega)},
                {"blocks", blocks}};
}

UniversalSeries series_from_json(const json& j) {
    UniversalSeries s;
    s.S = j.at("S").get<int>();
    s.grid_log2 = j.at("grid_log2").get<int>();
    s.omega = modulus_from_json(j.at("omega"));
    for (const auto& e : j.at("blocks")) {
        SeriesBlock b;
        b.s = e.at("s").get<int>();
        b.f = step_function_from_json(e.at("f"));
        b.E = interval_set_from_json(e.at("E"));
        b.N_prev = e.at("N_prev").get<long>();
        b.N = e.at("N").get<long>();
        b.budget = e.at("budget").get<double>();
        b.geometry_epsilon = e.at("geometry_epsilon").get<double>();
        b.coeff_budget = e.at("coeff_budget").get<double>();
        b.approx_error_on_E = e.at("approx_error_on_E").get<double>();
        b.complement_measure = e.at("complement_measure").get<double>();
        b.ok = e.at("ok").get<bool>();
        b.bands = bands_from_json(e.at("spectrum"));
        s.blocks.push_back(std::move(b));
    }
    return s;
}

json to_json(const WeightSpec& w) {
    json omega_sets = json::array();
    for (const auto& s : w.omega_sets) omega_sets.push_back(to_json(s));
    json levels = json::array();
    for (std::size_t n = 1; n <= w.mu_levels.size(); ++n)
        levels.push_back({{"n", n}, {"mu_n", w.mu_levels[n - 1]}, {"h_n", w.h[n - 1]}});
    return json{{"kind", "weight"},
                {"epsilon", w.epsilon},
                {"n0", w.n0},
                {"S", w.S},
                {"levels", levels},
                {"omega_sets", omega_sets},
                {"E", to_json(w.E)},
                {"B", to_json(w.B)},
                {"truncation_error_bound", w.truncation_error_bound}};
}

WeightSpec weight_from_json(const json& j) {
    WeightSpec w;
    w.epsilon = j.at("epsilon").get<double>();
    w.n0 = j.at("n0").get<int>();
    w.S = j.at("S").get<int>();
    for (const auto& e : j.at("levels")) {
        w.mu_levels.push_back(e.at("mu_n").get<double>());
        w.h.push_back(e.at("h_n").get<double>());
    }
    for (const auto& e : j.at("omega_sets")) w.omega_sets.push_back(interval_set_from_json(e));
    w.E = interval_set_from_json(j.at("E"));
    w.B = interval_set_from_json(j.at("B"));
    w.truncation_error_bound = j.at("truncation_error_bound").get<double>();
    return w;
}

json to_json(const RearrangeResult& r) {
    json emissions = json::array();
    for (const auto& e : r.series.emissions)
        emissions.push_back({e.k, e.c.real(), e.c.imag()});
    return json{{"kind", "rearrange_run"},
                {"emissions", emissions},
                {"error_curve", r.error_curve},
                {"bound_curve", r.bound_curve},
                {"chosen_nu", r.chosen_nu},
                {"chosen_m", r.chosen_m},
                {"converged", r.converged}};
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string& path) { return json::parse(read_text_file(path)); }

void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(1) + "\n");
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::pair<double, double>>& rows) {
    std::ostringstream ss;
    ss << header << "\n";
    ss.precision(17);
    for (const auto& [a, b] : rows) ss << a << "," << b << "\n";
    write_text_file(path, ss.str());
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream ss;
    ss << header << "\n";
    ss.precision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) ss << (i ? "," : "") << row[i];
        ss << "\n";
    }
    write_text_file(path, ss.str());
}

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

void check(std::vector<std::string>& failures, bool ok, const std::string& name) {
    if (!ok) failures.push_back(name);
}

} // namespace

std::vector<std::string> verify_lemma_artifact(const json& artifact) {
    std::vector<std::string> failures;
    const Grid g(artifact.at("grid_log2").get<int>());
    const double eps = artifact.at("epsilon").get<double>();
    const double eps_b = artifact.at("budget_epsilon").get<double>();
    const auto E = interval_set_from_json(artifact.at("E"));
    const auto f = step_function_from_json(artifact.at("step_function"));
    const auto omega = modulus_from_json(artifact.at("omega"));
    const auto bands = bands_from_json(artifact.at("spectrum"));
    const auto& margins = artifact.at("margins");

    check(failures, close(E.measure() - (kTwoPi - eps), margins.at("condition1").get<double>(), 1e-9),
          "condition1-margin");

    const auto p = eval_partial_sum(bands, -1, g);
    const auto fs = f.sample(g);
    std::vector<double> diff(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) diff[j] = std::abs(p[j] - fs[j]);
    const double i2 = integrate_on_set(diff, E, g);
    check(failures, close(i2, margins.at("integral_E_P_minus_f").get<double>(),
                          1e-7 * (1.0 + std::abs(i2))),
          "condition2-integral");
    check(failures, i2 < eps_b || !artifact.at("all_ok").get<bool>(), "condition2-bound");

    const double budget = coefficient_budget(bands, omega);
    check(failures, close(budget, margins.at("coeff_budget").get<double>(),
                          1e-9 * (1.0 + budget)),
          "condition3-budget");
    check(failures, budget < eps_b, "condition3-bound");

    // Hermitian layout and band containment.
    for (const auto& b : bands) {
        for (const auto& e : b.spectrum.entries())
            if (e.k < b.lo || e.k >= b.hi) failures.push_back("band-containment");
        if (b.lo < artifact.at("N0").get<long>()) failures.push_back("band-floor");
    }
    return failures;
}

std::vector<std::string> verify_series_artifact(const json& artifact) {
    std::vector<std::string> failures;
    const auto series = series_from_json(artifact);
    const auto omega = series.omega;
    long prev = 1;
    for (const auto& blk : series.blocks) {
        check(failures, blk.N_prev == prev, "band-chain");
        check(failures, blk.N > blk.N_prev, "band-increasing");
        prev = blk.N;
        check(failures, blk.complement_measure < blk.geometry_epsilon, "plateau-measure");
        check(failures,
              close(blk.complement_measure, kTwoPi - blk.E.measure(),
                    1e-9 * (1.0 + blk.complement_measure)),
              "plateau-measure-stored");
        const double budget = coefficient_budget(blk.bands, omega);
        check(failures, close(budget, blk.coeff_budget, 1e-9 * (1.0 + budget)), "block-budget-stored");
        if (blk.ok)
            check(failures,
                  budget < std::max(std::pow(2.0, -2.0 * blk.s), 4.0 * blk.budget),
                  "block-budget-bound");
    }
    return failures;
}

std::vector<std::string> verify_weight_artifact(const json& weight, const json& series_json) {
    std::vector<std::string> failures;
    const auto w = weight_from_json(weight);
    const auto series = series_from_json(series_json);
    check(failures, w.n0 == weight_cutoff_n0(w.epsilon), "n0");
    // mu_n * 2^{2n} * prod h_s = 1
    double prod = 1.0;
    for (std::size_t n = 1; n <= w.mu_levels.size(); ++n) {
        prod *= w.h[n - 1];
        const double lhs = w.mu_levels[n - 1] * std::pow(2.0, 2.0 * static_cast<double>(n)) * prod;
        check(failures, close(lhs, 1.0, 1e-12), "mu-normalization");
    }
    for (double m : w.mu_levels)
        check(failures, m > 0.0 && m <= 1.0, "mu-range");
    // Omega_n nondecreasing and matching the series' plateau sets.
    for (std::size_t i = 0; i + 1 < w.omega_sets.size(); ++i) {
        const double inter = intersect(w.omega_sets[i], w.omega_sets[i + 1]).measure();
        check(failures, close(inter, w.omega_sets[i].measure(), 1e-9), "omega-monotone");
    }
    if (!w.omega_sets.empty()) {
        IntervalSet expect = series.block(series.S).E;
        for (int s = series.S - 1; s >= w.n0; --s) expect = intersect(series.block(s).E, expect);
        check(failures, close(expect.measure(), w.E.measure(), 1e-9), "E-from-series");
    }
    const double not_one = complement_within(w.E, w.B).measure();
    check(failures, not_one + w.truncation_error_bound < w.epsilon, "measure-mu-not-1");
    return failures;
}

std::vector<std::string> verify_rearrange_artifact(const json& run, const json& series_json) {
    std::vector<std::string> failures;
    const auto series = series_from_json(series_json);
    std::unordered_set<long> seen;
    const auto& emissions = run.at("emissions");
    for (const auto& e : emissions) {
        const long k = e.at(0).get<long>();
        check(failures, seen.insert(k).second, "emission-duplicate");
        const std::complex<double> c(e.at(1).get<double>(), e.at(2).get<double>());
        const auto expect = series.coefficient(k);
        check(failures, close(std::abs(c - expect), 0.0, 1e-12 * (1.0 + std::abs(expect))),
              "emission-support");
    }
    const auto& err = run.at("error_curve");
    const auto& bnd = run.at("bound_curve");
    check(failures, err.size() == bnd.size(), "curve-shape");
    for (std::size_t i = 0; i < err.size() && i < bnd.size(); ++i)
        check(failures, err[i].get<double>() < bnd[i].get<double>(), "round-bound");
    return failures;
}

} // namespace useries
