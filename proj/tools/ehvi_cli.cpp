// Command-line experiment harness: rank-correlation comparisons of EHVI
// estimators (analytic, Monte Carlo, Gauss-Hermite) over random predictive
// densities, node-count sweeps, grid dumps for plotting, and single
// evaluations from files.
//
// Exit codes: 0 success, 2 configuration/parse error, 3 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ehvi/ehvi.hpp"
#include "ehvi/experiment.hpp"
#include "ehvi/fronts.hpp"

namespace {

using namespace ehvi;

struct CliOptions {
    ExperimentConfig cfg;
    std::string shape = "concave-sphere";
    std::string ref_policy = "box-upper";
    std::string kind = "independent";
    std::string baseline = "auto";
    std::string format = "csv";
};

void add_experiment_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->set_config("--config", "", "read flags from an INI file (flags override it)");
    cmd->add_option("--front", opt.cfg.front_path, "front CSV (one point per line)");
    cmd->add_option("--shape", opt.shape,
                    "generated front shape: linear, concave-sphere, concave-ellipsoid, "
                    "convex, disconnected")
        ->capture_default_str();
    cmd->add_option("--m", opt.cfg.front.dim, "objective-space dimension")
        ->capture_default_str();
    cmd->add_option("--count", opt.cfg.front.count, "front points to generate")
        ->capture_default_str();
    cmd->add_option("--radii", opt.cfg.front.radii, "ellipsoid semi-axes");
    cmd->add_option("--ref-policy", opt.ref_policy, "box-upper or nadir-plus-margin")
        ->capture_default_str();
    cmd->add_option("--ref-margin", opt.cfg.ref_margin, "margin for nadir-plus-margin")
        ->capture_default_str();
    cmd->add_option("--kind", opt.kind, "independent or correlated")
        ->capture_default_str();
    cmd->add_option("--baseline", opt.baseline, "auto, exact, reference, or mc")
        ->capture_default_str();
    cmd->add_option("--trials", opt.cfg.trials, "random densities per study")
        ->capture_default_str();
    cmd->add_option("--mc-samples", opt.cfg.mc_samples, "Monte Carlo samples")
        ->capture_default_str();
    cmd->add_option("--gh-nodes", opt.cfg.gh_nodes, "GH nodes per dimension (list)");
    cmd->add_option("--prune", opt.cfg.prune_rate, "GH pruning rate in [0,1)")
        ->capture_default_str();
    cmd->add_option("--seed", opt.cfg.seed, "base RNG seed")->capture_default_str();
    cmd->add_option("--out", opt.cfg.out_path, "output file path");
    cmd->add_option("--format", opt.format, "csv or json")->capture_default_str();
    cmd->add_flag("--timing", opt.cfg.include_timing,
                  "include wall-clock columns (breaks byte-reproducibility)");
    cmd->add_option("--cells", opt.cfg.reference_cells,
                    "reference oracle cells per dimension (0 = auto)");
    cmd->add_option("--wishart-dof-offset", opt.cfg.wishart_dof_offset,
                    "Wishart dof = m + offset for correlated densities")
        ->capture_default_str();
    cmd->add_option("--budget", opt.cfg.node_budget, "GH node budget")
        ->capture_default_str();
}

ExperimentConfig resolve(CliOptions& opt) {
    opt.cfg.front.shape = shape_from_name(opt.shape);
    if (opt.ref_policy == "box-upper")
        opt.cfg.ref_policy = ReferencePolicy::BOX_UPPER;
    else if (opt.ref_policy == "nadir-plus-margin")
        opt.cfg.ref_policy = ReferencePolicy::NADIR_PLUS_MARGIN;
    else
        throw ConfigError("unknown --ref-policy '" + opt.ref_policy + "'");
    if (opt.kind == "independent")
        opt.cfg.kind = DistributionKind::INDEPENDENT;
    else if (opt.kind == "correlated")
        opt.cfg.kind = DistributionKind::CORRELATED;
    else
        throw ConfigError("unknown --kind '" + opt.kind + "'");
    if (opt.baseline == "auto")
        opt.cfg.baseline = BaselineMethod::AUTO;
    else if (opt.baseline == "exact")
        opt.cfg.baseline = BaselineMethod::EXACT;
    else if (opt.baseline == "reference")
        opt.cfg.baseline = BaselineMethod::REFERENCE;
    else if (opt.baseline == "mc")
        opt.cfg.baseline = BaselineMethod::MC;
    else
        throw ConfigError("unknown --baseline '" + opt.baseline + "'");
    if (opt.format == "csv")
        opt.cfg.format = OutputFormat::CSV;
    else if (opt.format == "json")
        opt.cfg.format = OutputFormat::JSON;
    else
        throw ConfigError("unknown --format '" + opt.format + "'");
    if (const char* env = std::getenv("EHVI_QUAD_THREADS"))
        opt.cfg.threads = std::max(1, std::atoi(env));
    return opt.cfg;
}

void print_summaries(const CompareResult& res) {
    std::printf("method_a        method_b        tau        p_value      n\n");
    for (const auto& s : res.summaries)
        std::printf("%-15s %-15s %-10.6g %-12.6g %d\n", s.method_a.c_str(),
                    s.method_b.c_str(), s.tau, s.p_value, s.n);
}

GaussianDensity density_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open density file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("density file '" + path + "': " + e.what());
    }
    return density_from_json(j);
}

GaussianDensity density_from_flags(const std::vector<double>& mu,
                                   const std::vector<double>& cov,
                                   const std::string& density_path) {
    if (!density_path.empty()) return density_from_file(density_path);
    if (mu.empty()) throw ConfigError("need --mu/--cov or --density");
    const int m = static_cast<int>(mu.size());
    if (static_cast<int>(cov.size()) != m * m)
        throw ConfigError("--cov must hold m*m row-major entries");
    return GaussianDensity(mu, SymMatrix::from_rows(m, cov));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "EHVI estimator comparison harness.\n"
        "compare/sweep CSV columns: trial, mu_1..mu_m, cov_1_1..cov_m_m (row-major),\n"
        "then per method: value, evaluation count, mc_se after mc, and _ns columns\n"
        "when --timing is set. sweep rows: n, parity, nodes, tau, p_value."};
    app.require_subcommand(1);

    CliOptions compare_opt, sweep_opt, corr_opt;
    CLI::App* compare = app.add_subcommand(
        "compare", "EHVI per method per random density, pairwise Kendall tau");
    add_experiment_flags(compare, compare_opt);
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Kendall tau against the baseline for each GH node count");
    add_experiment_flags(sweep, sweep_opt);
    CLI::App* correlated = app.add_subcommand(
        "correlated", "compare with correlated (Wishart) predictive densities");
    add_experiment_flags(correlated, corr_opt);

    std::vector<double> mu, cov;
    std::string density_path, grid_out;
    int grid_n = 8;
    double grid_prune = 0.2;
    std::size_t grid_budget = kDefaultNodeBudget;
    CLI::App* ghgrid = app.add_subcommand(
        "gh-grid", "dump a pruned, transformed GH grid as CSV (x_1..x_m, weight)");
    ghgrid->add_option("--mu", mu, "density mean");
    ghgrid->add_option("--cov", cov, "covariance, row-major m*m");
    ghgrid->add_option("--density", density_path, "density JSON file");
    ghgrid->add_option("--n", grid_n, "nodes per dimension")->capture_default_str();
    ghgrid->add_option("--prune", grid_prune, "pruning rate")->capture_default_str();
    ghgrid->add_option("--out", grid_out, "output CSV path")->required();
    ghgrid->add_option("--budget", grid_budget, "node budget")->capture_default_str();

    std::string ev_front, ev_density, ev_method = "gh";
    std::size_t ev_mc_samples = 10000;
    int ev_gh_n = 15, ev_cells = 300;
    double ev_prune = 0.2;
    std::uint64_t ev_seed = 1;
    CLI::App* evaluate = app.add_subcommand(
        "ehvi", "single EHVI evaluation from a front CSV and a density JSON");
    evaluate->add_option("--front", ev_front, "front CSV")->required();
    evaluate->add_option("--density", ev_density, "density JSON file")->required();
    evaluate->add_option("--method", ev_method, "mc, gh, exact2d, or reference")
        ->capture_default_str();
    evaluate->add_option("--mc-samples", ev_mc_samples, "MC samples")
        ->capture_default_str();
    evaluate->add_option("--gh-n", ev_gh_n, "GH nodes per dimension")
        ->capture_default_str();
    evaluate->add_option("--prune", ev_prune, "GH pruning rate")->capture_default_str();
    evaluate->add_option("--cells", ev_cells, "reference cells per dimension")
        ->capture_default_str();
    evaluate->add_option("--seed", ev_seed, "MC seed")->capture_default_str();

    try {
        app.parse(argc, argv);

        if (compare->parsed() || correlated->parsed()) {
            CliOptions& opt = compare->parsed() ? compare_opt : corr_opt;
            if (correlated->parsed()) opt.kind = "correlated";
            const CompareResult res = run_compare(resolve(opt));
            write_compare_output(res);
            print_summaries(res);
        } else if (sweep->parsed()) {
            const SweepResult res = run_sweep(resolve(sweep_opt));
            write_sweep_output(res);
            std::printf("baseline: %s\n%s", res.baseline.c_str(),
                        sweep_rows_csv(res).c_str());
            if (!res.odd_monotone_within_slack || !res.even_monotone_within_slack)
                std::fprintf(stderr,
                             "note: tau not monotone within %s node counts "
                             "(beyond 0.02 slack)\n",
                             res.odd_monotone_within_slack ? "even" : "odd");
        } else if (ghgrid->parsed()) {
            const GaussianDensity g = density_from_flags(mu, cov, density_path);
            const std::size_t rows = run_grid_dump(g, grid_n, grid_prune, grid_out,
                                                   grid_budget);
            std::printf("%zu nodes -> %s\n", rows, grid_out.c_str());
        } else if (evaluate->parsed()) {
            const ParetoFrontSet front = load_front(ev_front);
            const GaussianDensity g = density_from_file(ev_density);
            EhviEstimate est;
            if (ev_method == "mc") {
                RngStream rng(ev_seed);
                est = ehvi_mc(g, front, ev_mc_samples, rng);
            } else if (ev_method == "gh") {
                est = ehvi_gh(g, front, ev_gh_n, ev_prune);
            } else if (ev_method == "exact2d") {
                est = ehvi_exact_2d(g, front);
            } else if (ev_method == "reference") {
                est = ehvi_reference(g, front, ev_cells);
            } else {
                throw ConfigError("unknown --method '" + ev_method + "'");
            }
            nlohmann::json out;
            out["method"] = method_name(est.method);
            out["value"] = est.value;
            out["evaluations"] = est.evaluations;
            if (est.mc_std_error) out["std_error"] = *est.mc_std_error;
            std::printf("%s\n", out.dump().c_str());
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const InvalidSpec& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
