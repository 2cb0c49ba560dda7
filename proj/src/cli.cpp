#include "eigslab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "eigslab/core.hpp"
#include "eigslab/dims.hpp"
#include "eigslab/export.hpp"
#include "eigslab/percolation.hpp"
#include "eigslab/presets.hpp"
#include "eigslab/resistance.hpp"
#include "eigslab/rng.hpp"
#include "eigslab/spectral.hpp"
#include "eigslab/walker.hpp"

namespace eigslab {
namespace {

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Distinguish "this argument makes no sense" (usage, exit 2) from "this
// config is invalid" (validation, exit 1).
EIGSystem cli_resolve(const std::string& arg) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(arg, ec) && !make_preset(arg))
        throw UsageError("config '" + arg +
                         "' is neither a file nor a preset name (presets: dhl, "
                         "vicsek, laakso, xi, fig2, binary-tree, flower:U,V)");
    return resolve_config(arg);
}

double parse_p(const std::string& text) {
    if (text == "pc") return kPc;
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("--p expects a number in (0,1) or 'pc'");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

struct ManifestScope {
    RunManifest manifest;
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();

    ManifestScope(const std::vector<std::string>& args, uint64_t seed,
                  const std::string& config_text) {
        std::string line = "eigslab";
        for (const std::string& a : args) line += " " + a;
        manifest.command_line = line;
        manifest.seed = seed;
        manifest.tool_version = kToolVersion;
        manifest.config_hash = fnv1a_hex(config_text);
    }

    // Writes <path>.manifest.json next to every output file.
    void finish() {
        const auto elapsed = std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start);
        manifest.wall_time_ms = elapsed.count();
        for (const std::string& path : manifest.outputs)
            write_file(path + ".manifest.json", manifest_to_json(manifest));
    }
};

std::string format_count_matrix(const CountMatrix& m) {
    std::string out;
    for (const auto& row : m) {
        out += "  [";
        for (size_t j = 0; j < row.size(); ++j) {
            out += std::to_string(row[j]);
            if (j + 1 < row.size()) out += ", ";
        }
        out += "]\n";
    }
    return out;
}

std::string join_doubles(const std::vector<double>& xs) {
    std::string out;
    char buf[40];
    for (size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", xs[i]);
        out += buf;
        if (i + 1 < xs.size()) out += ", ";
    }
    return out;
}

int cmd_validate(const std::string& config) {
    EIGSystem sys = cli_resolve(config);
    auto canonical = validate_canonical(sys);
    auto positive = validate_distance_positive(sys);
    if (canonical.empty() && positive.empty()) {
        std::cout << "OK: canonical and distance-positive\n";
        return 0;
    }
    for (const Violation& v : canonical)
        std::cout << "canonicality: " << v.message << "\n";
    for (const Violation& v : positive)
        std::cout << "distance-positivity: " << v.message << "\n";
    return 1;
}

int cmd_build(const std::vector<std::string>& args, const std::string& config,
              int32_t level, const std::string& format, const std::string& out,
              int64_t edge_cap) {
    EIGSystem sys = cli_resolve(config);
    ManifestScope scope(args, 0, system_to_json(sys));
    LevelGraph g = build(sys, level, edge_cap);
    const std::string rendered = format == "dot" ? graph_to_dot(g) : graph_to_json(g);
    if (out.empty()) {
        std::cout << rendered;
    } else {
        write_file(out, rendered);
        scope.manifest.outputs.push_back(out);
        std::cout << "wrote " << out << " (level " << g.level << ", "
                  << g.n_vertices << " vertices, " << g.edges.size()
                  << " edges)\n";
    }
    scope.finish();
    return 0;
}

int cmd_matrices(const std::string& config) {
    EIGSystem sys = cli_resolve(config);
    CountMatrix m = mass_matrix(sys);
    CountMatrix n = degree_matrix(sys);
    auto family = distance_family(sys);
    std::cout << "M (" << m.size() << "x" << m.size() << "), rho = "
              << spectral_radius(m) << ":\n"
              << format_count_matrix(m);
    std::cout << "N (" << n.size() << "x" << n.size() << "), rho = "
              << spectral_radius(n) << ":\n"
              << format_count_matrix(n);
    std::cout << "distance family (" << family.size()
              << " matrices), rho_min = " << rho_min(family) << ":\n";
    for (const CountMatrix& d : family)
        std::cout << format_count_matrix(d) << "  --\n";
    return 0;
}

int cmd_psi(const std::string& config, std::vector<double> x, int32_t trace_n,
            double tol, int32_t max_iter) {
    EIGSystem sys = cli_resolve(config);
    if (x.empty()) x.assign(static_cast<size_t>(sys.colours), 1.0);
    if (static_cast<int32_t>(x.size()) != sys.colours)
        throw UsageError("--x needs exactly one value per colour");
    PsiEigenpair pair = psi_eigenpair(sys, tol, max_iter);
    std::cout << "rho(Psi) = " << pair.rho << "  (" << pair.iterations
              << " iterations, " << (pair.converged ? "converged" : "NOT converged")
              << ")\n";
    std::cout << "eigenvector (l1-normalised): [" << join_doubles(pair.x) << "]\n";
    if (trace_n > 0) {
        std::cout << "iterates from [" << join_doubles(x) << "]:\n";
        auto iterates = psi_iterates(sys, x, trace_n);
        for (size_t k = 0; k < iterates.size(); ++k)
            std::cout << "  n=" << (k + 1) << ": [" << join_doubles(iterates[k])
                      << "]\n";
    }
    return pair.converged ? 0 : 1;
}

int cmd_resistance(const std::string& config, int32_t level,
                   std::vector<double> x, const std::string& backend,
                   int64_t edge_cap) {
    EIGSystem sys = cli_resolve(config);
    if (x.empty()) x.assign(static_cast<size_t>(sys.colours), 1.0);
    if (static_cast<int32_t>(x.size()) != sys.colours)
        throw UsageError("--x needs exactly one value per colour");
    LevelGraph g = build(sys, level, edge_cap);
    auto edges = weighted_edges(g, x);
    auto solve = [&](ResistanceBackend b) {
        return effective_resistance(g.n_vertices, edges, g.terminal_plus,
                                    g.terminal_minus, b);
    };
    if (backend == "laplacian" || backend == "both") {
        std::cout << "laplacian: " << solve(ResistanceBackend::kLaplacian) << "\n";
    }
    if (backend == "reduction" || backend == "both") {
        std::cout << "reduction: " << solve(ResistanceBackend::kReduction) << "\n";
    }
    RenormCheck check = verify_renormalisation(sys, level, x, edge_cap);
    std::cout << "psi-iterated: " << check.iterated
              << "  (relative error vs direct solve: " << check.rel_error
              << ")\n";
    return 0;
}

int cmd_dims(const std::string& config) {
    EIGSystem sys = cli_resolve(config);
    DimensionReport r = dimensions(sys);
    nlohmann::json j;
    j["rho_M"] = r.rho_M;
    j["rho_N"] = r.rho_N;
    j["rho_min"] = r.rho_min;
    j["rho_psi"] = r.rho_psi;
    j["dim_B"] = r.dim_B;
    j["dim_D"] = std::isinf(r.dim_D) ? "inf" : nlohmann::json(r.dim_D);
    j["dim_R"] = r.dim_R;
    j["dim_W"] = r.dim_W;
    j["dim_S_finite"] = r.dim_S_finite;
    j["dim_S_generic"] = r.dim_S_generic;
    j["local_mass"] = r.local_mass;
    j["local_resistance"] = r.local_resistance;
    j["recurrent"] = r.recurrent;
    j["canonical"] = r.canonical;
    j["psi_converged"] = r.psi_converged;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_table1() {
    std::cout << format_table(table1());
    return 0;
}

int cmd_walk(const std::vector<std::string>& args, const std::string& config,
             int32_t level, int64_t trials, int32_t m_min, int32_t m_max,
             int64_t max_steps, uint64_t seed, int32_t workers,
             bool do_commute, bool do_return_prob, int64_t trace_steps,
             int64_t t0, int32_t time_count, const std::string& out,
             int64_t edge_cap) {
    EIGSystem sys = cli_resolve(config);
    ManifestScope scope(args, seed, system_to_json(sys));
    LevelGraph g = build(sys, level, edge_cap);
    Csr csr = build_csr(g);

    if (trace_steps > 0) {
        auto path = trace(csr, g.terminal_plus, trace_steps, seed);
        std::string csv = "step,vertex\n";
        for (size_t i = 0; i < path.size(); ++i)
            csv += std::to_string(i) + "," + std::to_string(path[i]) + "\n";
        if (out.empty()) {
            std::cout << csv;
        } else {
            write_file(out, csv);
            scope.manifest.outputs.push_back(out);
            std::cout << "wrote " << out << "\n";
        }
        scope.finish();
        return 0;
    }

    if (do_commute) {
        std::vector<double> ones(static_cast<size_t>(sys.colours), 1.0);
        const double r_eff = effective_resistance(
            g.n_vertices, weighted_edges(g, ones), g.terminal_plus,
            g.terminal_minus, ResistanceBackend::kLaplacian);
        CommuteStats stats =
            commute_time(csr, g.terminal_plus, g.terminal_minus, trials, seed,
                         r_eff, workers);
        const double sem = stats.stddev / std::sqrt(static_cast<double>(trials));
        std::cout << "commute mean = " << stats.mean_commute << "  expected 2|E|R = "
                  << stats.expected << "  (sem " << sem << ")\n";
        scope.finish();
        return 0;
    }

    if (do_return_prob) {
        auto times = geometric_times(t0, time_count);
        auto probs = return_probability(csr, g.terminal_plus, times, trials, seed);
        std::string csv = "t,p_return\n";
        for (size_t i = 0; i < times.size(); ++i)
            csv += std::to_string(times[i]) + "," + std::to_string(probs[i]) + "\n";
        if (!out.empty()) {
            write_file(out, csv);
            scope.manifest.outputs.push_back(out);
        } else {
            std::cout << csv;
        }
        std::cout << "spectral dimension estimate = "
                  << spectral_dimension_estimate(times, probs) << "\n";
        scope.finish();
        return 0;
    }

    const double rmin = rho_min(sys);
    WalkDimensionEstimate est = walk_dimension_estimate(
        g, rmin, m_min, m_max, trials, max_steps, seed, workers);
    std::string csv = "radius,mean_tau,stddev_tau,censored_fraction,trials\n";
    char buf[160];
    for (const ExitStats& s : est.per_radius) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%lld\n", s.radius,
                      s.mean_tau, s.stddev_tau, s.censored_fraction,
                      static_cast<long long>(s.trials));
        csv += buf;
    }
    if (!out.empty()) {
        write_file(out, csv);
        scope.manifest.outputs.push_back(out);
    } else {
        std::cout << csv;
    }
    std::cout << "walk dimension slope = " << est.slope << "\n";
    scope.finish();
    return 0;
}

int cmd_perc_alpha(const std::vector<std::string>& args, double p,
                   int64_t population, int32_t levels, uint64_t seed,
                   int32_t workers, const std::string& trajectory_out) {
    ManifestScope scope(args, seed, "p=" + std::to_string(p));
    AlphaEstimate est = estimate_alpha(p, population, levels, seed, workers);
    std::cout << "alpha_quenched = " << est.alpha_quenched << "\n";
    std::cout << "alpha_annealed = " << est.alpha_annealed << "\n";
    std::cout << "gap = " << est.gap << "\n";
    std::cout << "lower bound at p_c: " << alpha_lower_bound() << "\n";
    if (!trajectory_out.empty()) {
        std::string csv =
            "level,quenched,annealed,gap,pop_std,product_moment,"
            "second_moment_ratio\n";
        char buf[200];
        for (const PercLevelStats& s : est.trajectory) {
            std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.3e,%.6g,%.6g,%.6g\n",
                          s.level, s.quenched, s.annealed, s.gap, s.pop_std,
                          s.product_moment, s.second_moment_ratio);
            csv += buf;
        }
        write_file(trajectory_out, csv);
        scope.manifest.outputs.push_back(trajectory_out);
        std::cout << "wrote " << trajectory_out << "\n";
    }
    scope.finish();
    return 0;
}

int cmd_perc_exact(double p, int32_t n) {
    auto dist = exact_distribution(p, n);
    double total = 0.0;
    std::cout << "value,probability\n";
    for (const ExactAtom& atom : dist) {
        std::cout << atom.value.str() << "," << atom.probability << "\n";
        total += atom.probability;
    }
    std::cout << "# atoms = " << dist.size() << ", total probability = " << total
              << "\n";
    return 0;
}

int cmd_perc_dims(double p, double alpha, int64_t population, int32_t levels,
                  uint64_t seed) {
    ClusterReport rep = cluster_dimension_report(p, alpha, population, levels, seed);
    nlohmann::json j;
    j["p"] = rep.p;
    j["lambda_M"] = rep.lambda_m;
    j["lambda_N"] = rep.lambda_n;
    j["alpha"] = rep.alpha;
    j["dim_B"] = rep.dim_B;
    j["dim_D"] = rep.dim_D;
    j["dim_R"] = rep.dim_R;
    j["dim_W"] = rep.dim_W;
    j["dim_S_finite"] = rep.dim_S_finite;
    j["dim_S_generic"] = rep.dim_S_generic;
    j["note"] = "heuristic: cluster matrices are annealed expectations";
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"EIGS fractal-graph laboratory"};
    app.name("eigslab");
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    // validate
    std::string v_config;
    auto* validate = app.add_subcommand("validate", "check a system config");
    validate->add_option("config", v_config, "config file or preset name")
        ->required();

    // build
    std::string b_config, b_format = "json", b_out;
    int32_t b_level = 1;
    int64_t edge_cap = edge_cap_from_env();
    auto* build_cmd = app.add_subcommand("build", "build a level graph");
    build_cmd->add_option("config", b_config)->required();
    build_cmd->add_option("-n,--level", b_level, "substitution rounds")
        ->required();
    build_cmd->add_option("--format", b_format, "json or dot")
        ->check(CLI::IsMember({"json", "dot"}));
    build_cmd->add_option("-o,--output", b_out, "output file (default stdout)");
    build_cmd->add_option("--edge-cap", edge_cap, "refuse larger builds");

    // matrices
    std::string m_config;
    auto* matrices = app.add_subcommand("matrices", "print M, N and the distance family");
    matrices->add_option("config", m_config)->required();

    // psi
    std::string p_config;
    std::vector<double> p_x;
    int32_t p_trace = 0, p_max_iter = 10000;
    double p_tol = 1e-12;
    auto* psi_cmd = app.add_subcommand("psi", "renormalisation eigenpair");
    psi_cmd->add_option("config", p_config)->required();
    psi_cmd->add_option("--x", p_x, "starting resistances for --trace")
        ->delimiter(',');
    psi_cmd->add_option("-n,--trace", p_trace, "also print n raw iterates");
    psi_cmd->add_option("--tol", p_tol, "convergence tolerance");
    psi_cmd->add_option("--max-iter", p_max_iter);

    // resistance
    std::string r_config, r_backend = "both";
    std::vector<double> r_x;
    int32_t r_level = 1;
    auto* resistance_cmd =
        app.add_subcommand("resistance", "terminal resistance of a level graph");
    resistance_cmd->add_option("config", r_config)->required();
    resistance_cmd->add_option("-n,--level", r_level)->required();
    resistance_cmd->add_option("--x", r_x, "per-colour resistances")
        ->delimiter(',');
    resistance_cmd->add_option("--backend", r_backend)
        ->check(CLI::IsMember({"laplacian", "reduction", "both"}));
    resistance_cmd->add_option("--edge-cap", edge_cap);

    // dims
    std::string d_config;
    auto* dims_cmd = app.add_subcommand("dims", "dimension report");
    dims_cmd->add_option("config", d_config)->required();

    // table1
    app.add_subcommand("table1", "deterministic dimension table");

    // walk
    std::string w_config, w_out;
    int32_t w_level = 3, w_m_min = 1, w_m_max = 4, w_workers = 1,
            w_time_count = 8;
    int64_t w_trials = 1000, w_max_steps = 1000000, w_trace_steps = 0,
            w_t0 = 4;
    uint64_t w_seed = kDefaultSeed;
    bool w_commute = false, w_return = false;
    auto* walk_cmd = app.add_subcommand("walk", "random-walk experiments");
    walk_cmd->add_option("config", w_config)->required();
    walk_cmd->add_option("-n,--level", w_level, "build level");
    walk_cmd->add_option("--trials", w_trials);
    walk_cmd->add_option("--m-min", w_m_min, "smallest radius exponent");
    walk_cmd->add_option("--m-max", w_m_max, "largest radius exponent");
    walk_cmd->add_option("--max-steps", w_max_steps, "censoring horizon");
    walk_cmd->add_option("--seed", w_seed);
    walk_cmd->add_option("--workers", w_workers);
    walk_cmd->add_flag("--commute", w_commute, "commute-time identity check");
    walk_cmd->add_flag("--return-prob", w_return,
                       "return probabilities and spectral dimension");
    walk_cmd->add_option("--trace-steps", w_trace_steps,
                         "record one trajectory instead");
    walk_cmd->add_option("--t0", w_t0, "first return-probability time");
    walk_cmd->add_option("--time-count", w_time_count,
                         "number of geometric times");
    walk_cmd->add_option("-o,--output", w_out, "CSV output file");
    walk_cmd->add_option("--edge-cap", edge_cap);

    // perc
    auto* perc = app.add_subcommand("perc", "percolation population dynamics");
    perc->require_subcommand(1);
    std::string pa_p = "pc", pa_trajectory;
    int64_t pa_population = 100000;
    int32_t pa_levels = 2000, pa_workers = 1;
    uint64_t pa_seed = kDefaultSeed;
    auto* perc_alpha = perc->add_subcommand("alpha", "estimate the growth exponent");
    perc_alpha->add_option("--p", pa_p, "bond probability or 'pc'");
    perc_alpha->add_option("--population", pa_population);
    perc_alpha->add_option("--levels", pa_levels);
    perc_alpha->add_option("--seed", pa_seed);
    perc_alpha->add_option("--workers", pa_workers);
    perc_alpha->add_option("--trajectory", pa_trajectory, "per-level CSV file");

    std::string pe_p = "pc";
    int32_t pe_n = 2;
    auto* perc_exact = perc->add_subcommand("exact", "exact small-level distribution");
    perc_exact->add_option("--p", pe_p);
    perc_exact->add_option("-n,--level", pe_n, "level (0..3)");

    std::string pd_p = "pc";
    double pd_alpha = -1.0;
    int64_t pd_population = 100000;
    int32_t pd_levels = 2000;
    uint64_t pd_seed = kDefaultSeed;
    auto* perc_dims = perc->add_subcommand("dims", "cluster dimension report");
    perc_dims->add_option("--p", pd_p);
    perc_dims->add_option("--alpha", pd_alpha,
                          "reuse a previously estimated alpha");
    perc_dims->add_option("--population", pd_population);
    perc_dims->add_option("--levels", pd_levels);
    perc_dims->add_option("--seed", pd_seed);

    std::vector<const char*> argv;
    argv.push_back("eigslab");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(v_config);
        if (build_cmd->parsed())
            return cmd_build(args, b_config, b_level, b_format, b_out, edge_cap);
        if (matrices->parsed()) return cmd_matrices(m_config);
        if (psi_cmd->parsed())
            return cmd_psi(p_config, p_x, p_trace, p_tol, p_max_iter);
        if (resistance_cmd->parsed())
            return cmd_resistance(r_config, r_level, r_x, r_backend, edge_cap);
        if (dims_cmd->parsed()) return cmd_dims(d_config);
        if (app.get_subcommand("table1")->parsed()) return cmd_table1();
        if (walk_cmd->parsed())
            return cmd_walk(args, w_config, w_level, w_trials, w_m_min, w_m_max,
                            w_max_steps, w_seed, w_workers, w_commute, w_return,
                            w_trace_steps, w_t0, w_time_count, w_out, edge_cap);
        if (perc_alpha->parsed())
            return cmd_perc_alpha(args, parse_p(pa_p), pa_population, pa_levels,
                                  pa_seed, pa_workers, pa_trajectory);
        if (perc_exact->parsed()) return cmd_perc_exact(parse_p(pe_p), pe_n);
        if (perc_dims->parsed())
            return cmd_perc_dims(parse_p(pd_p), pd_alpha, pd_population,
                                 pd_levels, pd_seed);
        throw UsageError("no subcommand given");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SizeCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace eigslab
