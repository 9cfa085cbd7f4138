// Command-line front end: build, verify, and persist the pipeline's
// artifacts. Exit codes: 0 success, 2 config error, 3 construction failure,
// 4 verification failure.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "useries/enumeration.hpp"
#include "useries/serialize.hpp"

namespace fs = std::filesystem;
using namespace useries;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitVerification = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    int grid_override = 0;
    std::uint64_t seed = 0;
    bool has_seed = false;
};

json load_config(const CommonOpts& opts) {
    json cfg = read_json_file(opts.config_path);
    if (opts.grid_override > 0) cfg["grid"] = opts.grid_override;
    if (opts.has_seed) cfg["seed"] = opts.seed;
    return cfg;
}

Grid grid_from(const json& cfg) { return Grid(cfg.value("grid", 18)); }

std::string out_path(const CommonOpts& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    return (fs::path(opts.out_dir) / name).string();
}

int cmd_lemma(const CommonOpts& opts) {
    json cfg;
    LemmaParams params;
    StepFunction f;
    Grid g;
    try {
        cfg = load_config(opts);
        g = grid_from(cfg);
        f = step_function_from_json(cfg.at("step_function"));
        params.epsilon = cfg.at("epsilon").get<double>();
        params.N0 = cfg.at("N0").get<long>();
        params.omega = modulus_from_json(cfg.at("omega"));
        params.budget_epsilon = cfg.value("budget_epsilon", 0.0);
        params.exhaustive_m = cfg.value("exhaustive_m", false);
        params.subset_count = cfg.value("subset_count", 100);
        params.subset_seed = cfg.value("seed", std::uint64_t{2026});
        params.max_refine_level = cfg.value("max_refine_level", 12);
        if (!(params.epsilon > 0.0 && params.epsilon < 0.5))
            throw std::invalid_argument("epsilon must lie in (0, 1/2)");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const LemmaOutput out = build_lemma(f, params, g);
        write_json_file(out_path(opts, "lemma.json"), to_json(out, params, f, g.log2_points));
        const auto p = eval_partial_sum(out.bands, -1, g);
        const auto fs_ = f.sample(g);
        std::vector<std::pair<double, double>> rows;
        const std::size_t stride = std::max<std::size_t>(1, g.size() / 4096);
        for (std::size_t j = 0; j < g.size(); j += stride)
            rows.emplace_back(g.x(j), std::abs(p[j] - fs_[j]));
        write_csv(out_path(opts, "residual.csv"), "x,abs_P_minus_f", rows);
        std::cout << "lemma: margins " << out.report.margin1 << " " << out.report.margin2 << " "
                  << out.report.margin3 << " " << out.report.margin4 << ", band [" << out.N0
                  << ", " << out.N << ")\n";
        return 0;
    } catch (const ConstructionError& e) {
        std::cerr << "construction failure: " << e.what() << "\n";
        return kExitConstruction;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConstruction;
    }
}

int cmd_series(const CommonOpts& opts) {
    json cfg;
    int S = 0;
    Modulus omega;
    BuildOptions bopts;
    Grid g;
    try {
        cfg = load_config(opts);
        g = grid_from(cfg);
        S = cfg.at("S").get<int>();
        omega = modulus_from_json(cfg.at("omega"));
        bopts.budget_floor = cfg.value("budget_floor", 0.0);
        bopts.geometry_floor = cfg.value("geometry_floor", 0.0);
        bopts.best_effort = cfg.value("best_effort", false);
        if (S < 1) throw std::invalid_argument("S must be >= 1");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const UniversalSeries series = build_universal_series(S, omega, g, bopts);
        write_json_file(out_path(opts, "series.json"), to_json(series));
        std::cout << "series: S = " << series.S << ", top frequency " << series.top_frequency()
                  << "\n";
        return 0;
    } catch (const ConstructionError& e) {
        std::cerr << "construction failure: " << e.what() << "\n";
        return kExitConstruction;
    }
}

int cmd_weight(const CommonOpts& opts) {
    json cfg;
    double epsilon = 0.0;
    UniversalSeries series;
    Grid g;
    try {
        cfg = load_config(opts);
        g = grid_from(cfg);
        epsilon = cfg.at("epsilon").get<double>();
        series = series_from_json(read_json_file(cfg.at("series_file").get<std::string>()));
        if (series.grid_log2 != g.log2_points)
            throw std::invalid_argument("grid does not match the series file");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const WeightSpec w = build_weight(series, epsilon, g);
        write_json_file(out_path(opts, "weight.json"), to_json(w));
        std::cout << "weight: n0 = " << w.n0 << ", measure({mu != 1}) = "
                  << complement_within(w.E, w.B).measure() << "\n";
        return 0;
    } catch (const ConstructionError& e) {
        std::cerr << "construction failure: " << e.what() << "\n";
        return kExitConstruction;
    } catch (const std::invalid_argument& e) {
        std::cerr << "construction failure: " << e.what() << "\n";
        return kExitConstruction;
    }
}

Target make_target(const json& spec, const WeightSpec& w, const Grid& g) {
    const std::string kind = spec.at("kind").get<std::string>();
    Target t;
    if (kind == "zero") {
        t.samples.assign(g.size(), 0.0);
    } else if (kind == "const") {
        t.samples.assign(g.size(), spec.at("value").get<double>());
    } else if (kind == "sign") {
        const double pi = kTwoPi / 2.0;
        t.samples.resize(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double d = pi - g.x(j);
            t.samples[j] = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
        }
    } else if (kind == "ring_inverse_mu") {
        // 1/mu_n on the rings up to max_ring: integrable against mu, large in
        // plain L1 where the weight is small.
        const int max_ring = spec.value("max_ring", w.S);
        t.samples.assign(g.size(), 0.0);
        const auto mu = weight_samples(w, g);
        for (int n = w.n0 + 1; n <= std::min(max_ring, w.S); ++n) {
            const IntervalSet ring = complement_within(w.omega_set(n - 1), w.omega_set(n));
            for (const auto& p : ring.pieces()) {
                const std::size_t jlo = g.index_at_or_above(p.lo);
                const std::size_t jhi = g.index_at_or_above(p.hi);
                for (std::size_t j = jlo; j < jhi; ++j) t.samples[j] = 1.0 / mu[j];
            }
        }
    } else if (kind == "samples_csv") {
        const std::string text = read_text_file(spec.at("path").get<std::string>());
        std::istringstream ss(text);
        std::string line;
        std::getline(ss, line); // header
        while (std::getline(ss, line)) {
            const auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            t.samples.push_back(std::stod(line.substr(comma + 1)));
        }
        if (t.samples.size() != g.size())
            throw std::invalid_argument("samples_csv: row count does not match grid");
    } else {
        throw std::invalid_argument("unknown target kind '" + kind + "'");
    }
    return t;
}

int cmd_rearrange(const CommonOpts& opts) {
    json cfg;
    UniversalSeries series;
    WeightSpec w;
    Grid g;
    Target target;
    double tol = 0.0;
    int max_q = 0;
    int deepen_to = 0;
    BuildOptions bopts;
    try {
        cfg = load_config(opts);
        g = grid_from(cfg);
        series = series_from_json(read_json_file(cfg.at("series_file").get<std::string>()));
        w = weight_from_json(read_json_file(cfg.at("weight_file").get<std::string>()));
        tol = cfg.at("tol").get<double>();
        max_q = cfg.at("max_q").get<int>();
        deepen_to = cfg.value("deepen_to", 0);
        bopts.budget_floor = cfg.value("budget_floor", 0.0);
        bopts.geometry_floor = cfg.value("geometry_floor", 0.0);
        bopts.best_effort = cfg.value("best_effort", false);
        if (series.grid_log2 != g.log2_points)
            throw std::invalid_argument("grid does not match the series file");
        target = make_target(cfg.at("target"), w, g);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        std::function<bool(UniversalSeries&, int)> deepen;
        if (deepen_to > series.S)
            deepen = [&](UniversalSeries& s, int S_now) {
                if (S_now >= deepen_to) return false;
                extend_universal_series(s, std::min(deepen_to, S_now + 8), g, bopts);
                return true;
            };
        const RearrangeResult result = rearrange_run(target, series, w, g, tol, max_q, deepen);
        write_json_file(out_path(opts, "rearrange.json"), to_json(result));
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < result.error_curve.size(); ++i)
            rows.push_back({static_cast<double>(i + 1), result.error_curve[i],
                            result.bound_curve[i]});
        write_csv(out_path(opts, "error_curve.csv"), "q,error,bound", rows);
        std::cout << "rearrange: rounds = " << result.error_curve.size() << ", final error = "
                  << (result.error_curve.empty() ? 0.0 : result.error_curve.back())
                  << (result.converged ? " (converged)" : " (max_q reached)") << "\n";
        return 0;
    } catch (const ConstructionError& e) {
        std::cerr << "construction failure: " << e.what() << "\n";
        return kExitConstruction;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConstruction;
    }
}

int cmd_verify(const CommonOpts& opts) {
    json cfg;
    try {
        cfg = load_config(opts);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    std::vector<std::string> failures;
    try {
        if (cfg.contains("lemma")) {
            auto f = verify_lemma_artifact(read_json_file(cfg.at("lemma").get<std::string>()));
            failures.insert(failures.end(), f.begin(), f.end());
        }
        json series_json;
        if (cfg.contains("series")) {
            series_json = read_json_file(cfg.at("series").get<std::string>());
            auto f = verify_series_artifact(series_json);
            failures.insert(failures.end(), f.begin(), f.end());
        }
        if (cfg.contains("weight")) {
            if (series_json.is_null()) throw std::invalid_argument("weight check needs 'series'");
            auto f = verify_weight_artifact(read_json_file(cfg.at("weight").get<std::string>()),
                                            series_json);
            failures.insert(failures.end(), f.begin(), f.end());
        }
        if (cfg.contains("rearrange")) {
            if (series_json.is_null()) throw std::invalid_argument("rearrange check needs 'series'");
            auto f = verify_rearrange_artifact(
                read_json_file(cfg.at("rearrange").get<std::string>()), series_json);
            failures.insert(failures.end(), f.begin(), f.end());
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (failures.empty()) {
        std::cout << "verify: all checks passed\n";
        return 0;
    }
    for (const auto& f : failures) std::cerr << "verify: FAILED " << f << "\n";
    return kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"universal trigonometric series laboratory"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON config path")->required();
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--grid", opts.grid_override, "override grid log2 points");
        sub->add_option("--seed", opts.seed, "override subset-sampling seed")
            ->each([&](const std::string&) { opts.has_seed = true; });
    };

    auto* lemma = app.add_subcommand("lemma", "build one approximation block");
    auto* series = app.add_subcommand("series", "assemble the series to depth S");
    auto* weight = app.add_subcommand("weight", "construct the weight for a series");
    auto* rearrange = app.add_subcommand("rearrange", "greedy rearrangement toward a target");
    auto* verify = app.add_subcommand("verify", "re-check stored artifacts");
    for (auto* sub : {lemma, series, weight, rearrange, verify}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    if (lemma->parsed()) return cmd_lemma(opts);
    if (series->parsed()) return cmd_series(opts);
    if (weight->parsed()) return cmd_weight(opts);
    if (rearrange->parsed()) return cmd_rearrange(opts);
    if (verify->parsed()) return cmd_verify(opts);
    return kExitConfig;
}
