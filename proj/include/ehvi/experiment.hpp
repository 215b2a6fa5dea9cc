#pragma once

// Experiment harness: generates random predictive densities against a front,
// computes EHVI per method, reports pairwise Kendall rank correlations, and
// writes machine-readable records. Identical config + seed produces
// byte-identical output files; trial i draws from stream seed XOR i, so any
// subset of trials can be reproduced independently.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ehvi/ehvi.hpp"
#include "ehvi/errors.hpp"
#include "ehvi/fronts.hpp"
#include "ehvi/gaussians.hpp"
#include "ehvi/stats.hpp"

namespace ehvi {

enum class DistributionKind { INDEPENDENT, CORRELATED };
enum class OutputFormat { CSV, JSON };
enum class BaselineMethod { AUTO, EXACT, REFERENCE, MC };

struct ExperimentConfig {
    std::string front_path;  // CSV front; when empty, `front` is generated
    FrontSpec front;
    ReferencePolicy ref_policy = ReferencePolicy::BOX_UPPER;
    double ref_margin = 0.1;
    DistributionKind kind = DistributionKind::INDEPENDENT;
    BaselineMethod baseline = BaselineMethod::AUTO;
    int trials = 100;
    std::size_t mc_samples = 10000;
    std::vector<int> gh_nodes = {3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
    double prune_rate = 0.2;
    std::uint64_t seed = 1;
    std::string out_path;  // empty: nothing written
    OutputFormat format = OutputFormat::CSV;
    bool include_timing = false;  // timing columns are off so outputs stay reproducible
    int reference_cells = 0;      // 0 = auto: 300 at m=2, 100 at m=3
    int wishart_dof_offset = kDefaultWishartDofOffset;
    std::size_t node_budget = kDefaultNodeBudget;
    int threads = 1;
};

struct MethodResult {
    double value = 0.0;
    std::size_t evaluations = 0;
    std::optional<double> std_error;
    std::int64_t wall_ns = 0;
};

struct ExperimentRecord {
    int trial = 0;
    ObjectiveVector mean;
    std::vector<double> covariance;  // row-major
    std::vector<MethodResult> methods;
};

struct TauSummary {
    std::string method_a;
    std::string method_b;
    double tau = 0.0;
    double p_value = 1.0;
    int n = 0;
};

struct CompareResult {
    ExperimentConfig config;
    std::vector<ObjectiveVector> front_points;
    ObjectiveVector reference;
    std::vector<std::string> method_names;
    std::string baseline_method;
    std::vector<ExperimentRecord> records;
    std::vector<TauSummary> summaries;

    const std::vector<MethodResult>& trial_methods(int trial) const {
        return records[trial].methods;
    }
    std::vector<double> values_of(const std::string& method) const {
        for (std::size_t i = 0; i < method_names.size(); ++i)
            if (method_names[i] == method) {
                std::vector<double> out;
                out.reserve(records.size());
                for (const auto& rec : records) out.push_back(rec.methods[i].value);
                return out;
            }
        throw ConfigError("no method '" + method + "' in results");
    }
};

namespace detail {

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.trials < 2) throw ConfigError("config: trials must be >= 2");
    if (cfg.mc_samples < 1) throw ConfigError("config: mc-samples must be >= 1");
    if (!(cfg.prune_rate >= 0.0 && cfg.prune_rate < 1.0))
        throw ConfigError("config: prune rate must lie in [0, 1)");
    if (cfg.gh_nodes.empty()) throw ConfigError("config: need at least one gh node count");
    for (int n : cfg.gh_nodes)
        if (n < 1 || n > 100) throw ConfigError("config: gh node counts must lie in [1, 100]");
    if (cfg.threads < 1) throw ConfigError("config: threads must be >= 1");
    if (cfg.reference_cells != 0 && cfg.reference_cells < 50)
        throw ConfigError("config: reference cells must be 0 (auto) or >= 50");
}

inline ParetoFrontSet build_front(const ExperimentConfig& cfg) {
    if (!cfg.front_path.empty())
        return load_front(cfg.front_path, cfg.ref_policy, cfg.ref_margin);
    RngStream rng(cfg.seed ^ 0xF00D5EEDF00D5EEDull);
    return generate_front(cfg.front, rng, cfg.ref_policy, cfg.ref_margin);
}

inline int auto_cells(const ExperimentConfig& cfg, int m) {
    if (cfg.reference_cells != 0) return cfg.reference_cells;
    return m == 2 ? 300 : 100;
}

/// Reference with resolution escalation: coarse dominated-tail densities can
/// fail the refinement check, so double the grid a couple of times before
/// giving up.
inline EhviEstimate reference_escalated(const GaussianDensity& g,
                                        const ParetoFrontSet& front, int cells) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            return ehvi_reference(g, front, cells);
        } catch (const ResolutionTooLow&) {
            cells *= 2;
        }
    }
    return ehvi_reference(g, front, cells);
}

/// Method table and tau baseline. Independent studies rank against the
/// analytic value (exact2d at m=2, the reference oracle at m=3); correlated
/// studies rank against MC and always carry the diagonal-restricted analytic
/// column for the degradation comparison.
struct MethodPlan {
    std::vector<std::string> names;
    std::string baseline;
};

inline MethodPlan plan_methods(const ExperimentConfig& cfg, int m) {
    MethodPlan plan;
    if (cfg.kind == DistributionKind::INDEPENDENT) {
        BaselineMethod b = cfg.baseline;
        if (b == BaselineMethod::AUTO)
            b = m == 2 ? BaselineMethod::EXACT : BaselineMethod::REFERENCE;
        switch (b) {
            case BaselineMethod::EXACT:
                if (m != 2) throw ConfigError("exact baseline requires m == 2");
                plan.baseline = "exact2d";
                break;
            case BaselineMethod::REFERENCE:
                if (m > 3) throw ConfigError("reference baseline requires m <= 3");
                plan.baseline = "reference";
                break;
            default:
                plan.baseline = "mc";
        }
        plan.names.push_back(plan.baseline);
        if (plan.baseline != "mc") plan.names.push_back("mc");
    } else {
        if (m > 3) throw ConfigError("correlated studies require m <= 3");
        if (cfg.baseline == BaselineMethod::EXACT)
            throw ConfigError("no exact full-covariance baseline exists; use mc or reference");
        plan.baseline = cfg.baseline == BaselineMethod::REFERENCE ? "reference" : "mc";
        if (plan.baseline == "reference") plan.names.push_back("reference");
        plan.names.push_back(m == 2 ? "diag_exact2d" : "diag_reference");
        plan.names.push_back("mc");
    }
    for (int n : cfg.gh_nodes) plan.names.push_back("gh" + std::to_string(n));
    return plan;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_whole_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw ParseError("failed writing '" + path + "'");
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["front_path"] = cfg.front_path;
    j["shape"] = shape_name(cfg.front.shape);
    j["dim"] = cfg.front.dim;
    j["front_count"] = cfg.front.count;
    j["radii"] = cfg.front.radii;
    j["ref_policy"] =
        cfg.ref_policy == ReferencePolicy::BOX_UPPER ? "box-upper" : "nadir-plus-margin";
    j["ref_margin"] = cfg.ref_margin;
    j["kind"] = cfg.kind == DistributionKind::INDEPENDENT ? "independent" : "correlated";
    j["trials"] = cfg.trials;
    j["mc_samples"] = cfg.mc_samples;
    j["gh_nodes"] = cfg.gh_nodes;
    j["prune_rate"] = cfg.prune_rate;
    j["seed"] = cfg.seed;
    j["format"] = cfg.format == OutputFormat::CSV ? "csv" : "json";
    j["include_timing"] = cfg.include_timing;
    j["reference_cells"] = cfg.reference_cells;
    j["wishart_dof_offset"] = cfg.wishart_dof_offset;
    j["node_budget"] = cfg.node_budget;
    j["threads"] = cfg.threads;
    return j;
}

}  // namespace detail

/// Runs the full comparison study: `trials` random densities, EHVI per method
/// per trial, pairwise Kendall tau across methods. Methods are the analytic
/// baseline (exact2d / reference, diagonal-restricted for correlated runs),
/// Monte Carlo, and one GH estimator per requested node count.
inline CompareResult run_compare(const ExperimentConfig& cfg) {
    detail::validate(cfg);
    CompareResult result;
    result.config = cfg;
    const ParetoFrontSet front = detail::build_front(cfg);
    result.front_points = front.points();
    result.reference = front.reference();
    const int m = front.dim();
    const detail::MethodPlan plan = detail::plan_methods(cfg, m);
    result.method_names = plan.names;
    result.baseline_method = plan.baseline;

    const int cells = detail::auto_cells(cfg, m);
    result.records.resize(cfg.trials);

    auto run_trial = [&](int t) {
        ExperimentRecord rec;
        rec.trial = t;
        RngStream rng(cfg.seed ^ static_cast<std::uint64_t>(t));
        const GaussianDensity g =
            cfg.kind == DistributionKind::INDEPENDENT
                ? random_independent(front, rng)
                : random_correlated(front, rng, cfg.wishart_dof_offset);
        rec.mean = g.mean();
        rec.covariance = g.covariance().data();
        rec.methods.reserve(result.method_names.size());
        for (const std::string& name : result.method_names) {
            const auto t0 = std::chrono::steady_clock::now();
            EhviEstimate est;
            if (name == "exact2d") {
                est = ehvi_exact_2d(g, front);
            } else if (name == "diag_exact2d") {
                est = ehvi_exact_2d(diag_only(g), front);
            } else if (name == "reference") {
                est = detail::reference_escalated(g, front, cells);
            } else if (name == "diag_reference") {
                est = detail::reference_escalated(diag_only(g), front, cells);
            } else if (name == "mc") {
                est = ehvi_mc(g, front, cfg.mc_samples, rng);
            } else {
                const int n = std::stoi(name.substr(2));
                est = ehvi_gh(g, front, n, cfg.prune_rate, cfg.node_budget);
            }
            const auto t1 = std::chrono::steady_clock::now();
            MethodResult mr;
            mr.value = est.value;
            mr.evaluations = est.evaluations;
            mr.std_error = est.mc_std_error;
            mr.wall_ns =
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
            rec.methods.push_back(std::move(mr));
        }
        result.records[t] = std::move(rec);
    };

    if (cfg.threads <= 1) {
        for (int t = 0; t < cfg.trials; ++t) run_trial(t);
    } else {
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> workers;
        const int nw = std::min(cfg.threads, cfg.trials);
        for (int w = 0; w < nw; ++w) {
            workers.emplace_back([&, w]() {
                try {
                    for (int t = w; t < cfg.trials; t += nw) run_trial(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& th : workers) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    for (std::size_t i = 0; i < result.method_names.size(); ++i) {
        for (std::size_t j = i + 1; j < result.method_names.size(); ++j) {
            std::vector<double> a, b;
            a.reserve(cfg.trials);
            b.reserve(cfg.trials);
            for (const auto& rec : result.records) {
                a.push_back(rec.methods[i].value);
                b.push_back(rec.methods[j].value);
            }
            const KendallResult k = kendall_tau(a, b);
            result.summaries.push_back(
                {result.method_names[i], result.method_names[j], k.tau, k.p_value, k.n});
        }
    }
    return result;
}

/// Stable CSV rendering of the records (column order documented in --help).
inline std::string compare_records_csv(const CompareResult& res) {
    const int m = static_cast<int>(res.reference.size());
    std::string out = "trial";
    for (int i = 0; i < m; ++i) out += ",mu_" + std::to_string(i + 1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out += ",cov_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
    for (const auto& name : res.method_names) {
        out += "," + name + "," + name + "_evals";
        if (name == "mc") out += ",mc_se";
        if (res.config.include_timing) out += "," + name + "_ns";
    }
    out += "\n";
    for (const auto& rec : res.records) {
        out += std::to_string(rec.trial);
        for (double v : rec.mean) out += "," + detail::format_double(v);
        for (double v : rec.covariance) out += "," + detail::format_double(v);
        for (std::size_t i = 0; i < rec.methods.size(); ++i) {
            const auto& mr = rec.methods[i];
            out += "," + detail::format_double(mr.value) + "," +
                   std::to_string(mr.evaluations);
            if (res.method_names[i] == "mc")
                out += "," + detail::format_double(mr.std_error.value_or(0.0));
            if (res.config.include_timing) out += "," + std::to_string(mr.wall_ns);
        }
        out += "\n";
    }
    return out;
}

inline std::string summaries_csv(const std::vector<TauSummary>& summaries) {
    std::string out = "method_a,method_b,tau,p_value,n\n";
    for (const auto& s : summaries)
        out += s.method_a + "," + s.method_b + "," + detail::format_double(s.tau) + "," +
               detail::format_double(s.p_value) + "," + std::to_string(s.n) + "\n";
    return out;
}

inline nlohmann::json compare_to_json(const CompareResult& res) {
    nlohmann::json j;
    j["config"] = detail::config_to_json(res.config);
    j["front"] = {{"points", res.front_points}, {"reference", res.reference}};
    j["records"] = nlohmann::json::array();
    for (const auto& rec : res.records) {
        nlohmann::json r;
        r["trial"] = rec.trial;
        r["density"] = {{"mean", rec.mean}, {"covariance", rec.covariance}};
        nlohmann::json methods;
        for (std::size_t i = 0; i < rec.methods.size(); ++i) {
            nlohmann::json mj;
            mj["value"] = rec.methods[i].value;
            mj["evaluations"] = rec.methods[i].evaluations;
            if (rec.methods[i].std_error) mj["std_error"] = *rec.methods[i].std_error;
            if (res.config.include_timing) mj["wall_ns"] = rec.methods[i].wall_ns;
            methods[res.method_names[i]] = std::move(mj);
        }
        r["methods"] = std::move(methods);
        j["records"].push_back(std::move(r));
    }
    j["summaries"] = nlohmann::json::array();
    for (const auto& s : res.summaries)
        j["summaries"].push_back({{"method_a", s.method_a},
                                  {"method_b", s.method_b},
                                  {"tau", s.tau},
                                  {"p_value", s.p_value},
                                  {"n", s.n}});
    return j;
}

/// Writes records (CSV) or the full result (JSON) to cfg.out_path.
inline void write_compare_output(const CompareResult& res) {
    if (res.config.out_path.empty()) return;
    if (res.config.format == OutputFormat::CSV)
        detail::write_whole_file(res.config.out_path, compare_records_csv(res));
    else
        detail::write_whole_file(res.config.out_path, compare_to_json(res).dump(2) + "\n");
}

struct SweepRow {
    int n = 0;
    bool odd = false;
    std::size_t nodes = 0;
    double tau = 0.0;
    double p_value = 1.0;
};

struct SweepResult {
    CompareResult compare;
    std::string baseline;
    std::vector<SweepRow> rows;
    bool odd_monotone_within_slack = true;
    bool even_monotone_within_slack = true;
};

/// Rank-correlation-versus-node-count table: one row per GH node count,
/// against the configured baseline. Monotonicity within the odd and even
/// subsequences is reported as a diagnostic (0.02 slack), never enforced.
inline SweepResult run_sweep(const ExperimentConfig& cfg) {
    if (cfg.gh_nodes.size() < 2)
        throw ConfigError("sweep: need at least two gh node counts");
    SweepResult sweep;
    sweep.compare = run_compare(cfg);
    sweep.baseline = sweep.compare.baseline_method;
    const std::vector<double> base = sweep.compare.values_of(sweep.baseline);
    double last_odd = -2.0, last_even = -2.0;
    for (int n : cfg.gh_nodes) {
        const std::string name = "gh" + std::to_string(n);
        const std::vector<double> vals = sweep.compare.values_of(name);
        const KendallResult k = kendall_tau(vals, base);
        SweepRow row;
        row.n = n;
        row.odd = n % 2 == 1;
        for (std::size_t i = 0; i < sweep.compare.method_names.size(); ++i)
            if (sweep.compare.method_names[i] == name)
                row.nodes = sweep.compare.records.front().methods[i].evaluations;
        row.tau = k.tau;
        row.p_value = k.p_value;
        if (row.odd) {
            if (row.tau < last_odd - 0.02) sweep.odd_monotone_within_slack = false;
            last_odd = std::max(last_odd, row.tau);
        } else {
            if (row.tau < last_even - 0.02) sweep.even_monotone_within_slack = false;
            last_even = std::max(last_even, row.tau);
        }
        sweep.rows.push_back(row);
    }
    return sweep;
}

inline std::string sweep_rows_csv(const SweepResult& sweep) {
    std::string out = "n,parity,nodes,tau,p_value\n";
    for (const auto& r : sweep.rows)
        out += std::to_string(r.n) + "," + (r.odd ? "odd" : "even") + "," +
               std::to_string(r.nodes) + "," + detail::format_double(r.tau) + "," +
               detail::format_double(r.p_value) + "\n";
    return out;
}

inline nlohmann::json sweep_to_json(const SweepResult& sweep) {
    nlohmann::json j;
    j["config"] = detail::config_to_json(sweep.compare.config);
    j["baseline"] = sweep.baseline;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : sweep.rows)
        j["rows"].push_back({{"n", r.n},
                             {"parity", r.odd ? "odd" : "even"},
                             {"nodes", r.nodes},
                             {"tau", r.tau},
                             {"p_value", r.p_value}});
    j["odd_monotone_within_slack"] = sweep.odd_monotone_within_slack;
    j["even_monotone_within_slack"] = sweep.even_monotone_within_slack;
    return j;
}

inline void write_sweep_output(const SweepResult& sweep) {
    const auto& cfg = sweep.compare.config;
    if (cfg.out_path.empty()) return;
    if (cfg.format == OutputFormat::CSV)
        detail::write_whole_file(cfg.out_path, sweep_rows_csv(sweep));
    else
        detail::write_whole_file(cfg.out_path, sweep_to_json(sweep).dump(2) + "\n");
}

/// Dumps the pruned, transformed grid for a density as CSV (x_1..x_m, weight).
/// The file is only created after the grid is built, so a bad path never
/// leaves partial output. Returns the node count.
inline std::size_t run_grid_dump(const GaussianDensity& g, int n, double prune_rate,
                                 const std::string& out_path,
                                 std::size_t node_budget = kDefaultNodeBudget) {
    const QuadratureGrid grid = gh_grid(g, n, prune_rate, node_budget);
    std::string content;
    for (int i = 0; i < g.dim(); ++i)
        content += (i ? ",x_" : "x_") + std::to_string(i + 1);
    content += ",weight\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (int i = 0; i < g.dim(); ++i)
            content += (i ? "," : "") + detail::format_double(grid.node(k)[i]);
        content += "," + detail::format_double(grid.weights[k]) + "\n";
    }
    detail::write_whole_file(out_path, content);
    return grid.size();
}

}  // namespace ehvi
