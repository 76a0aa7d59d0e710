// occt: occupation-time laws of alternating renewal processes and reflected
// spectrally positive Levy processes.
//
// Subcommands: transform | dist | clt | ldp | simulate | validate.
// Runs are driven by a single JSON config (see README for the schema);
// results are emitted as CSV (RFC 4180) or JSON {meta, rows}.

#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "occt/errors.hpp"
#include "occt/ldp.hpp"
#include "occt/renewal.hpp"
#include "occt/simulate.hpp"
#include "occt/storage_stats.hpp"
#include "occt/table.hpp"
#include "occt/transforms.hpp"
#include "occt/validate.hpp"

using nlohmann::json;
using namespace occt;

namespace {

struct RunConfig {
    std::optional<SojournLaw> law;
    std::optional<LevyModel> model;
    double tau = 1.0;
    std::vector<double> theta{1.0};
    std::vector<double> q{1.0};
    std::vector<double> t{1.0};
    std::vector<double> x;
    std::vector<double> frac;
    InversionConfig inversion;
    LatticeConfig lattice;
    SimConfig simulation;
    std::string out_path = "-";
    std::string format = "csv";
    std::uint64_t config_hash = 0;
};

Marginal parse_marginal(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "exponential") return Marginal::exponential(j.at("rate").get<double>());
    if (family == "erlang")
        return Marginal::erlang(j.at("shape").get<int>(), j.at("rate").get<double>());
    if (family == "deterministic")
        return Marginal::deterministic(j.at("value").get<double>());
    throw ConfigError("unknown marginal family: " + family);
}

LevyModel parse_model(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "brownian")
        return LevyModel::brownian(j.at("mu").get<double>(), j.at("sigma2").get<double>());
    if (kind == "cp_exp_drift")
        return LevyModel::cp_exp_drift(j.at("lambda").get<double>(),
                                       j.at("jump_mean").get<double>());
    if (kind == "cp_phase_type_drift") {
        const auto alpha = j.at("alpha").get<std::vector<double>>();
        std::vector<double> T;
        for (const auto& row : j.at("T"))
            for (const auto& v : row) T.push_back(v.get<double>());
        return LevyModel::cp_phase_type_drift(j.at("lambda").get<double>(), alpha, T);
    }
    throw ConfigError("unknown model kind: " + kind);
}

std::vector<std::pair<double, double>> read_pair_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sample file: " + path);
    std::vector<std::pair<double, double>> out;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("sample file needs two comma-separated columns");
        out.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    return out;
}

SojournLaw parse_law(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "independent")
        return SojournLaw::independent(parse_marginal(j.at("D")), parse_marginal(j.at("U")));
    if (kind == "marshall_olkin")
        return SojournLaw::marshall_olkin(j.at("rate_d").get<double>(),
                                          j.at("rate_u").get<double>(),
                                          j.at("rate_common").get<double>());
    if (kind == "storage_induced")
        return SojournLaw::storage_induced(parse_model(j.at("model")),
                                           j.at("tau").get<double>());
    if (kind == "empirical") return SojournLaw::empirical(read_pair_csv(j.at("path")));
    throw ConfigError("unknown law kind: " + kind);
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    RunConfig cfg;
    cfg.config_hash = fnv1a(text);
    if (j.contains("law") == j.contains("model"))
        throw ConfigError("config must contain exactly one of {law, model}");
    if (j.contains("law")) cfg.law = parse_law(j["law"]);
    if (j.contains("model")) cfg.model = parse_model(j["model"]);
    cfg.tau = j.value("tau", 1.0);
    auto grid = [&](const char* key, std::vector<double>& dst) {
        if (!j.contains(key)) return;
        dst.clear();
        for (const auto& v : j[key]) dst.push_back(v.get<double>());
    };
    grid("theta", cfg.theta);
    grid("q", cfg.q);
    grid("t", cfg.t);
    grid("x", cfg.x);
    grid("frac", cfg.frac);
    if (j.contains("inversion")) {
        const auto& ji = j["inversion"];
        const std::string alg = ji.value("algorithm", "euler-summation");
        cfg.inversion.algorithm = alg == "talbot" ? InversionAlgorithm::talbot
                                                  : InversionAlgorithm::euler_summation;
        cfg.inversion.terms = ji.value("terms", cfg.inversion.terms);
        cfg.inversion.euler_order = ji.value("euler_order", cfg.inversion.euler_order);
        cfg.inversion.target_abs_tol = ji.value("target_abs_tol", cfg.inversion.target_abs_tol);
        cfg.inversion.contour_scale = ji.value("contour_scale", cfg.inversion.contour_scale);
        cfg.inversion.validate();
    }
    if (j.contains("lattice")) {
        const auto& jl = j["lattice"];
        cfg.lattice.h = jl.value("h", 0.0);
        cfg.lattice.tol = jl.value("tol", cfg.lattice.tol);
        cfg.lattice.empirical_samples =
            jl.value("empirical_samples", cfg.lattice.empirical_samples);
    }
    if (j.contains("simulation")) {
        const auto& js = j["simulation"];
        cfg.simulation.seed = js.value("seed", cfg.simulation.seed);
        cfg.simulation.replications = js.value("replications", cfg.simulation.replications);
        cfg.simulation.horizon = js.value("horizon", cfg.simulation.horizon);
        cfg.simulation.dt = js.value("dt", cfg.simulation.dt);
        cfg.simulation.tau = js.value("tau", cfg.tau);
    }
    if (j.contains("output")) {
        cfg.out_path = j["output"].value("path", cfg.out_path);
        cfg.format = j["output"].value("format", cfg.format);
        if (cfg.format != "csv" && cfg.format != "json")
            throw ConfigError("output format must be csv or json");
    }
    return cfg;
}

void stamp_meta(Table& table, const RunConfig& cfg) {
    table.set_meta("seed", std::to_string(cfg.simulation.seed));
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash));
    table.set_meta("config_fnv1a", hash);
    table.set_meta("occt_version", "0.1.0");
}

int emit(Table& table, const RunConfig& cfg) {
    stamp_meta(table, cfg);
    const std::string body = cfg.format == "json" ? table.to_json() : table.to_csv();
    if (cfg.out_path == "-") {
        std::cout << body;
        return 0;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output: " + cfg.out_path);
    out << body;
    return 0;
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// --- transform -------------------------------------------------------------

int cmd_transform(const RunConfig& cfg) {
    Table table({"theta", "q", "double_transform", "renewal_route", "availability_A",
                 "availability_B", "free_limit", "abs_error_estimate"});
    std::optional<SojournLaw> renewal_law = cfg.law;
    std::optional<ScaleEvaluator> scale;
    if (cfg.model) {
        scale.emplace(*cfg.model);
        if (cfg.model->bounded_variation() && cfg.model->stable() && cfg.tau > 0.0)
            renewal_law = SojournLaw::storage_induced(*cfg.model, cfg.tau);
    }
    for (double th : cfg.theta) {
        for (double qq : cfg.q) {
            double primary = nan_value(), renewal = nan_value(), free_lim = nan_value();
            double err = 0.0;
            if (scale) {
                primary = storage::occupation_double_transform(*scale, cfg.tau, th, qq);
                if (cfg.model->stable())
                    free_lim =
                        storage::free_occupation_double_transform(*cfg.model, th, qq);
            }
            double in_a = nan_value(), in_b = nan_value();
            if (renewal_law) {
                renewal = alpha_double_transform(*renewal_law, th, qq);
                std::tie(in_a, in_b) = availability_transforms(*renewal_law, qq);
                if (!scale) primary = renewal;
            }
            table.add_row({th, qq, primary, renewal, in_a, in_b, free_lim, err});
        }
    }
    if (cfg.model && cfg.model->kind() == LevyModel::Kind::brownian) {
        const auto& b = cfg.model->as_brownian();
        if (b.mu == 0.0 && b.sigma2 == 1.0)
            table.set_meta("special_case", "driftless-unit-variance-handbook");
    }
    return emit(table, cfg);
}

// --- dist --------------------------------------------------------------------

int cmd_dist(const RunConfig& cfg) {
    Table table({"t", "x", "series_cdf", "series_error", "inverted_cdf", "normal_approx"});
    std::optional<SojournLaw> law = cfg.law;
    std::optional<ScaleEvaluator> scale;
    if (cfg.model) {
        scale.emplace(*cfg.model);
        if (cfg.model->bounded_variation() && cfg.model->stable() && cfg.tau > 0.0)
            law = SojournLaw::storage_induced(*cfg.model, cfg.tau);
    }
    MomentSummary ms = law ? law->moments()
                           : storage::sojourn_moments(*scale, cfg.tau).summary;
    for (double tt : cfg.t) {
        const std::vector<double> xs =
            cfg.x.empty() ? std::vector<double>{0.25 * tt, 0.5 * tt, 0.75 * tt, tt} : cfg.x;
        for (double xx : xs) {
            if (xx > tt) continue;
            double series = nan_value(), series_err = nan_value();
            if (law && xx < tt) {
                const auto s = exact_cdf_alpha(*law, tt, xx, cfg.lattice);
                series = s.value;
                series_err = s.error_estimate;
            } else if (xx >= tt) {
                series = 1.0;
                series_err = 0.0;
            }
            const double inverted =
                scale ? storage::occupation_cdf(*scale, cfg.tau, tt, xx, cfg.inversion).value
                      : occupation_cdf_from_law(*law, tt, xx, cfg.inversion).value;
            const double gauss =
                ms.clt_scale > 0.0 ? normal_approx_cdf(ms, tt, xx) : nan_value();
            table.add_row({tt, xx, series, series_err, inverted, gauss});
        }
    }
    return emit(table, cfg);
}

// --- clt ---------------------------------------------------------------------

int cmd_clt(const RunConfig& cfg) {
    Table table({"alpha", "beta", "var_D", "var_U", "cov_DU", "clt_scale",
                 "var_U_arbitrated"});
    MomentSummary ms;
    if (cfg.law) {
        ms = cfg.law->moments();
    } else {
        ScaleEvaluator scale(*cfg.model);
        ms = storage::sojourn_moments(scale, cfg.tau).summary;
    }
    table.add_row({ms.alpha, ms.beta, ms.var_D, ms.var_U, ms.cov_DU, ms.clt_scale,
                   ms.var_U_from_transform});
    return emit(table, cfg);
}

// --- ldp ----------------------------------------------------------------------

int cmd_ldp(const RunConfig& cfg) {
    Table table({"frac", "theta_star", "drain", "rate", "t", "tail_asymptote"});
    SojournLaw law = cfg.law ? *cfg.law : SojournLaw::storage_induced(*cfg.model, cfg.tau);
    const auto ms = law.moments();
    std::vector<double> fracs = cfg.frac;
    if (fracs.empty()) {
        const double p = ms.mean_fraction();
        for (int i = 1; i <= 4; ++i) fracs.push_back(p + (1.0 - p) * 0.15 * i);
    }
    for (double f : fracs) {
        const auto r = rate_function(law, f);
        for (double tt : cfg.t)
            table.add_row({f, r.theta_star, r.drain, r.value, tt, std::exp(-tt * r.value)});
    }
    return emit(table, cfg);
}

// --- simulate -------------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, std::optional<std::uint64_t> seed_override) {
    SimConfig sim = cfg.simulation;
    if (seed_override) sim.seed = *seed_override;
    if (!(sim.horizon > 0.0)) throw ConfigError("simulate: simulation.horizon must be > 0");
    sim.validate();
    Table table({"replication", "alpha_t", "beta_t", "n_cycles"});
    const auto n = sim.replications;
    std::vector<PathSample> paths(static_cast<size_t>(n));
    std::vector<std::int64_t> cycles(static_cast<size_t>(n), 0);
    if (cfg.law) {
        const SojournLaw law = *cfg.law;
        for_each_replication(sim.seed, n, [&](std::int64_t r, Rng& rng) {
            auto p = simulate_alternating(law, sim.horizon, rng, true);
            cycles[static_cast<size_t>(r)] = static_cast<std::int64_t>(p.cycle_pairs.size());
            p.cycle_pairs.clear();
            paths[static_cast<size_t>(r)] = std::move(p);
        });
    } else if (cfg.model->bounded_variation()) {
        const LevyModel model = *cfg.model;
        for_each_replication(sim.seed, n, [&](std::int64_t r, Rng& rng) {
            std::vector<CycleRecord> cyc;
            paths[static_cast<size_t>(r)] = simulate_storage(model, sim, rng, &cyc);
            cycles[static_cast<size_t>(r)] = static_cast<std::int64_t>(cyc.size());
        });
    } else {
        const auto& b = cfg.model->as_brownian();
        const double mu = b.mu, sigma2 = b.sigma2;
        for_each_replication(sim.seed, n, [&](std::int64_t r, Rng& rng) {
            paths[static_cast<size_t>(r)] = simulate_rbm(mu, sigma2, sim, rng);
        });
    }
    for (std::int64_t r = 0; r < n; ++r)
        table.add_row({r, paths[static_cast<size_t>(r)].alpha_t,
                       paths[static_cast<size_t>(r)].beta_t, cycles[static_cast<size_t>(r)]});
    RunConfig stamped = cfg;
    stamped.simulation = sim;
    return emit(table, stamped);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"occupation-time analytics for alternating renewal and reflected "
                 "spectrally positive Levy models"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::string format_override;
    std::optional<std::uint64_t> seed_override;
    std::uint64_t validate_seed = 13;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_path, "JSON run configuration");
        if (need_config) opt->required();
        sub->add_option("--out", out_override, "output path ('-' for stdout)");
        sub->add_option("--format", format_override, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { seed_override = s; },
            "override the simulation seed");
    };

    auto* c_transform = app.add_subcommand("transform", "double transforms and availability");
    auto* c_dist = app.add_subcommand("dist", "exact / inverted / Gaussian occupation CDFs");
    auto* c_clt = app.add_subcommand("clt", "cycle moment summary and CLT constants");
    auto* c_ldp = app.add_subcommand("ldp", "large-deviations rate table");
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo paths to CSV/JSON");
    auto* c_validate = app.add_subcommand("validate", "run the acceptance suite");
    for (auto* sub : {c_transform, c_dist, c_clt, c_ldp, c_sim}) add_common(sub, true);
    c_validate->add_option("--seed", validate_seed, "suite seed (default 13)");
    c_validate->add_option("--out", out_override, "write the report to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_validate->parsed()) {
            const auto report = run_validation(validate_seed);
            const std::string text = report.render();
            if (!out_override.empty() && out_override != "-") {
                std::ofstream out(out_override, std::ios::binary);
                out << text;
            }
            std::cout << text;
            return report.all_pass() ? 0 : 2;
        }
        RunConfig cfg = parse_config(config_path);
        if (!out_override.empty()) cfg.out_path = out_override;
        if (!format_override.empty()) cfg.format = format_override;
        if (seed_override) cfg.simulation.seed = *seed_override;
        if (c_transform->parsed()) return cmd_transform(cfg);
        if (c_dist->parsed()) return cmd_dist(cfg);
        if (c_clt->parsed()) return cmd_clt(cfg);
        if (c_ldp->parsed()) return cmd_ldp(cfg);
        if (c_sim->parsed()) return cmd_simulate(cfg, seed_override);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
