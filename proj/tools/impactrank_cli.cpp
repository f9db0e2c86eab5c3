// impactrank: citation-network ranking and evaluation tool.
//
// Subcommands: rank (pagerank|attrank|citerank|futurerank|ram|ecm),
// split, eval, sweep, fit-eta. Exit codes: 0 success, 2 usage/config
// error, 3 runtime/method error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "impactrank/attrank.hpp"
#include "impactrank/baselines.hpp"
#include "impactrank/corpus.hpp"
#include "impactrank/harness.hpp"
#include "impactrank/metrics.hpp"
#include "impactrank/walkcore.hpp"

namespace fs = std::filesystem;
using namespace impactrank;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOpts {
    std::string edges;
    std::string meta;
    std::string output = "-";
    double tol = 1e-12;
    int max_iter = 200;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_output = true) {
    cmd->add_option("--edges", opts.edges, "Edge file: citing<TAB>cited per line")->required();
    cmd->add_option("--meta", opts.meta,
                    "Metadata file: id<TAB>year_or_date[<TAB>author(;author)*]")
        ->required();
    if (with_output)
        cmd->add_option("--output,-o", opts.output, "Output file ('-' = stdout)")
            ->capture_default_str();
    cmd->add_option("--tol", opts.tol, "Convergence tolerance (L1)")->capture_default_str();
    cmd->add_option("--max-iter,--max_iter", opts.max_iter, "Iteration cap")
        ->capture_default_str();
}

void check_inputs_exist(const CommonOpts& opts) {
    for (const std::string& p : {opts.edges, opts.meta})
        if (!fs::exists(p)) throw CLI::ValidationError("--edges/--meta", "no such file: " + p);
}

// Output sink: stdout for "-", else a file (parent directory created).
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path != "-") {
            fs::path p(path);
            if (p.has_parent_path()) fs::create_directories(p.parent_path());
            file_.open(p);
            if (!file_) throw CLI::ValidationError("--output", "cannot open " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

struct AttRankOpts {
    double alpha = -1.0;
    double beta = -1.0;
    double gamma = -1.0;
    double eta = 0.0;
    int y = 3;
    std::string mode = "count_fraction";
};

void add_attrank_opts(CLI::App* cmd, AttRankOpts& o) {
    cmd->add_option("--alpha", o.alpha, "Reference-following probability (required here or in --config)");
    cmd->add_option("--beta", o.beta, "Attention-teleport probability (required here or in --config)");
    cmd->add_option("--gamma", o.gamma, "Recency-teleport probability (default: 1-alpha-beta)");
    cmd->add_option("--eta", o.eta, "Recency decay exponent (<= 0)")->capture_default_str();
    cmd->add_option("--y", o.y, "Attention window in years")->capture_default_str();
    cmd->add_option("--attention-mode,--attention_mode", o.mode,
                    "count_fraction or weighted_reference")
        ->capture_default_str();
}

std::string trimmed(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Plain `key = value` config; '#' lines are comments. Command-line
// flags take precedence over config values.
std::map<std::string, std::string> read_kv_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParams("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        line = trimmed(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParams("config line is not 'key = value': '" + line + "'");
        kv[trimmed(line.substr(0, eq))] = trimmed(line.substr(eq + 1));
    }
    return kv;
}

// Fills attrank options (and tol/max_iter) from a config file; returns
// whether gamma was pinned by either source.
bool merge_attrank_config(CLI::App* cmd, const std::string& path, AttRankOpts& o,
                          CommonOpts& common) {
    bool gamma_given = cmd->count("--gamma") > 0;
    if (path.empty()) return gamma_given;
    auto parse_double = [](const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw InvalidParams("config value for '" + key + "' is not a number: '" + v + "'");
        }
    };
    for (const auto& [key, value] : read_kv_config(path)) {
        if (key == "alpha") {
            if (cmd->count("--alpha") == 0) o.alpha = parse_double(key, value);
        } else if (key == "beta") {
            if (cmd->count("--beta") == 0) o.beta = parse_double(key, value);
        } else if (key == "gamma") {
            if (cmd->count("--gamma") == 0) o.gamma = parse_double(key, value);
            gamma_given = true;
        } else if (key == "eta") {
            if (cmd->count("--eta") == 0) o.eta = parse_double(key, value);
        } else if (key == "y") {
            if (cmd->count("--y") == 0) o.y = static_cast<int>(parse_double(key, value));
        } else if (key == "attention_mode") {
            if (cmd->count("--attention-mode") == 0) o.mode = value;
        } else if (key == "tol") {
            if (cmd->count("--tol") == 0) common.tol = parse_double(key, value);
        } else if (key == "max_iter") {
            if (cmd->count("--max-iter") == 0) common.max_iter = static_cast<int>(parse_double(key, value));
        } else {
            throw InvalidParams("unknown config key '" + key + "'");
        }
    }
    return gamma_given;
}

AttRankParams resolve_attrank(const AttRankOpts& o, bool gamma_given) {
    AttRankParams p;
    p.alpha = o.alpha;
    p.beta = o.beta;
    if (gamma_given) {
        p.gamma = o.gamma;
    } else {
        if (o.alpha + o.beta > 1.0 + 1e-12)
            throw InvalidParams("alpha+beta exceeds 1; cannot infer gamma");
        p.gamma = std::max(0.0, 1.0 - o.alpha - o.beta);
    }
    p.eta = o.eta;
    p.y = o.y;
    p.attention_mode = attention_mode_from_string(o.mode);
    p.validate();
    return p;
}

void print_run_stats(const std::string& method, int iterations, double ms) {
    std::fprintf(stderr, "%s: %d iteration(s), %.1f ms\n", method.c_str(), iterations, ms);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Citation-network ranking by expected short-term impact"};
    app.require_subcommand(1);

    // ---- rank ------------------------------------------------------
    auto* rank = app.add_subcommand("rank", "Score papers and write a score CSV");
    rank->require_subcommand(1);

    CommonOpts rank_common;
    AttRankOpts at;
    double pr_alpha = 0.5;
    double cr_alpha = 0.5, cr_tau = 2.0;
    FutureRankParams fr;
    double ram_gamma = 0.5;
    double ecm_alpha = 0.1, ecm_gamma = 0.3;

    auto* r_attrank = rank->add_subcommand("attrank", "AttRank (attention + recency teleports)");
    add_common(r_attrank, rank_common);
    add_attrank_opts(r_attrank, at);
    std::string attrank_config;
    r_attrank->add_option("--config", attrank_config,
                          "Config file of key = value lines (alpha, beta, gamma, eta, y, "
                          "attention_mode, tol, max_iter)");

    auto* r_pagerank = rank->add_subcommand("pagerank", "PageRank with uniform teleport");
    add_common(r_pagerank, rank_common);
    r_pagerank->add_option("--alpha", pr_alpha, "Damping factor")->capture_default_str();

    auto* r_citerank = rank->add_subcommand("citerank", "CiteRank traffic");
    add_common(r_citerank, rank_common);
    r_citerank->add_option("--alpha", cr_alpha, "Reference-following probability")
        ->capture_default_str();
    r_citerank->add_option("--tau-dir,--tau_dir", cr_tau, "Recency decay time in years")
        ->capture_default_str();

    auto* r_futurerank = rank->add_subcommand("futurerank", "FutureRank (paper/author reinforcement)");
    add_common(r_futurerank, rank_common);
    r_futurerank->add_option("--alpha", fr.alpha, "Citation-walk coefficient")->capture_default_str();
    r_futurerank->add_option("--beta", fr.beta, "Author coefficient")->capture_default_str();
    r_futurerank->add_option("--gamma", fr.gamma, "Recency coefficient")->capture_default_str();
    r_futurerank->add_option("--rho", fr.rho, "Recency decay exponent (< 0)")->capture_default_str();

    auto* r_ram = rank->add_subcommand("ram", "Retained adjacency (age-weighted citations)");
    add_common(r_ram, rank_common);
    r_ram->add_option("--gamma", ram_gamma, "Citation age decay base in (0,1)")
        ->capture_default_str();

    auto* r_ecm = rank->add_subcommand("ecm", "Effective contagion (weighted citation chains)");
    add_common(r_ecm, rank_common);
    r_ecm->add_option("--alpha", ecm_alpha, "Chain length decay in (0,1)")->capture_default_str();
    r_ecm->add_option("--gamma", ecm_gamma, "Citation age decay base in (0,1)")
        ->capture_default_str();

    // ---- split -----------------------------------------------------
    auto* split_cmd = app.add_subcommand("split", "Persist a temporal split and its STI vector");
    CommonOpts split_common;
    add_common(split_cmd, split_common, /*with_output=*/false);
    double test_ratio = 1.6;
    std::string output_dir;
    split_cmd->add_option("--test-ratio,--test_ratio", test_ratio, "Future/current size ratio in [1,2]")
        ->capture_default_str();
    split_cmd->add_option("--output-dir,--output_dir", output_dir, "Directory for manifest + sti.csv")
        ->required();

    // ---- eval ------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a method against the STI ground truth");
    CommonOpts eval_common;
    add_common(eval_cmd, eval_common);
    std::string eval_method;
    double eval_ratio = 1.6;
    std::vector<int> eval_ks;
    bool include_zero_truth = false;
    AttRankOpts eval_at;
    eval_at.alpha = 0.2;
    eval_at.beta = 0.4;
    eval_at.gamma = 0.4;
    double e_cr_tau = 2.0;
    FutureRankParams e_fr;
    double e_ram_gamma = 0.5, e_ecm_alpha = 0.1, e_ecm_gamma = 0.3;
    eval_cmd->add_option("--method", eval_method,
                         "pagerank|attrank|citerank|futurerank|ram|ecm")
        ->required();
    eval_cmd->add_option("--test-ratio,--test_ratio", eval_ratio, "Future/current size ratio")
        ->capture_default_str();
    eval_cmd->add_option("--k", eval_ks, "nDCG cutoffs (repeatable; default 5 10 50 100 500)");
    eval_cmd->add_flag("--include-zero-truth", include_zero_truth,
                       "Keep papers with zero STI in the correlation");
    eval_cmd->add_option("--alpha", eval_at.alpha, "attrank/pagerank/citerank/futurerank/ecm alpha");
    eval_cmd->add_option("--beta", eval_at.beta, "attrank/futurerank beta");
    eval_cmd->add_option("--gamma", eval_at.gamma, "attrank/futurerank gamma");
    eval_cmd->add_option("--eta", eval_at.eta, "attrank eta");
    eval_cmd->add_option("--y", eval_at.y, "attrank window years");
    eval_cmd->add_option("--attention-mode,--attention_mode", eval_at.mode,
                         "attrank attention mode");
    eval_cmd->add_option("--rho", e_fr.rho, "futurerank rho");
    eval_cmd->add_option("--tau-dir,--tau_dir", e_cr_tau, "citerank tau_dir");
    eval_cmd->add_option("--ram-gamma,--ram_gamma", e_ram_gamma, "ram gamma");
    eval_cmd->add_option("--ecm-alpha,--ecm_alpha", e_ecm_alpha, "ecm alpha");
    eval_cmd->add_option("--ecm-gamma,--ecm_gamma", e_ecm_gamma, "ecm gamma");

    // ---- sweep -----------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "Grid-sweep a method over its tuning space");
    CommonOpts sweep_common;
    add_common(sweep_cmd, sweep_common);
    std::string sweep_method = "attrank";
    std::string sweep_metric = "spearman";
    double sweep_ratio = 1.6;
    int sweep_k = 50;
    int sweep_jobs = 1;
    double sweep_eta = 0.0;
    std::string sweep_mode = "count_fraction";
    bool sweep_include_zero = false;
    sweep_cmd->add_option("--method", sweep_method, "attrank|citerank|futurerank|ram|ecm")
        ->capture_default_str();
    sweep_cmd->add_option("--metric", sweep_metric, "spearman or ndcg")->capture_default_str();
    sweep_cmd->add_option("--test-ratio,--test_ratio", sweep_ratio, "Future/current size ratio")
        ->capture_default_str();
    sweep_cmd->add_option("--k", sweep_k, "nDCG cutoff (when --metric ndcg)")
        ->capture_default_str();
    sweep_cmd->add_option("--jobs", sweep_jobs, "Concurrent cells")
        ->envname("IMPACTRANK_JOBS")
        ->capture_default_str();
    sweep_cmd->add_option("--eta", sweep_eta, "attrank recency exponent for every cell")
        ->capture_default_str();
    sweep_cmd->add_option("--attention-mode,--attention_mode", sweep_mode,
                          "attrank attention mode for every cell")
        ->capture_default_str();
    sweep_cmd->add_flag("--include-zero-truth", sweep_include_zero,
                        "Keep papers with zero STI in the correlation");

    // ---- fit-eta ---------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit-eta", "Fit the recency exponent from citation ages");
    CommonOpts fit_common;
    add_common(fit_cmd, fit_common, /*with_output=*/false);
    int max_age = 10;
    int tail_start = -1;
    bool fit_on_current = false;
    double fit_ratio = 1.6;
    fit_cmd->add_option("--max-age,--max_age", max_age, "Oldest citation age bucket")
        ->capture_default_str();
    fit_cmd->add_option("--tail-start,--tail_start", tail_start,
                        "First age of the fitted tail (default: distribution mode)");
    fit_cmd->add_flag("--split-current", fit_on_current,
                      "Fit on the current half of the temporal split only");
    fit_cmd->add_option("--test-ratio,--test_ratio", fit_ratio,
                        "Split ratio used with --split-current")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        // ---- rank --------------------------------------------------
        if (rank->parsed()) {
            check_inputs_exist(rank_common);
            MethodSpec spec;
            spec.tol = rank_common.tol;
            spec.max_iter = rank_common.max_iter;
            std::string method_name;
            if (r_attrank->parsed()) {
                spec.kind = MethodSpec::Kind::AttRank;
                bool gamma_given = merge_attrank_config(r_attrank, attrank_config, at, rank_common);
                if (at.alpha < 0.0 || at.beta < 0.0)
                    throw InvalidParams("alpha and beta are required (flag or config file)");
                spec.tol = rank_common.tol;
                spec.max_iter = rank_common.max_iter;
                spec.attrank = resolve_attrank(at, gamma_given);
                method_name = "attrank";
            } else if (r_pagerank->parsed()) {
                spec.kind = MethodSpec::Kind::PageRank;
                spec.pagerank_alpha = pr_alpha;
                if (!(pr_alpha >= 0.0 && pr_alpha < 1.0))
                    throw InvalidParams("pagerank alpha must be in [0, 1)");
                method_name = "pagerank";
            } else if (r_citerank->parsed()) {
                spec.kind = MethodSpec::Kind::CiteRank;
                spec.baseline.method = BaselineMethod::CR;
                spec.baseline.cr_alpha = cr_alpha;
                spec.baseline.cr_tau_dir = cr_tau;
                spec.baseline.validate();
                method_name = "citerank";
            } else if (r_futurerank->parsed()) {
                spec.kind = MethodSpec::Kind::FutureRank;
                spec.baseline.method = BaselineMethod::FR;
                spec.baseline.fr_alpha = fr.alpha;
                spec.baseline.fr_beta = fr.beta;
                spec.baseline.fr_gamma = fr.gamma;
                spec.baseline.fr_rho = fr.rho;
                spec.baseline.validate();
                method_name = "futurerank";
            } else if (r_ram->parsed()) {
                spec.kind = MethodSpec::Kind::Ram;
                spec.baseline.method = BaselineMethod::RAM;
                spec.baseline.ram_gamma = ram_gamma;
                spec.baseline.validate();
                method_name = "ram";
            } else if (r_ecm->parsed()) {
                spec.kind = MethodSpec::Kind::Ecm;
                spec.baseline.method = BaselineMethod::ECM;
                spec.baseline.ecm_alpha = ecm_alpha;
                spec.baseline.ecm_gamma = ecm_gamma;
                spec.baseline.validate();
                method_name = "ecm";
            }

            CitationGraph graph = load_graph_files(rank_common.edges, rank_common.meta);
            GraphView view(graph, graph.paper_count());
            const auto start = std::chrono::steady_clock::now();
            RankOutcome outcome = run_method(spec, view);
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            Sink sink(rank_common.output);
            write_score_csv(sink.stream(), view, outcome.scores);
            print_run_stats(method_name, outcome.iterations, ms);
            return 0;
        }

        // ---- split -------------------------------------------------
        if (split_cmd->parsed()) {
            check_inputs_exist(split_common);
            CitationGraph graph = load_graph_files(split_common.edges, split_common.meta);
            SplitView split = temporal_split(graph, test_ratio);
            fs::create_directories(output_dir);

            std::ofstream sti_file(fs::path(output_dir) / "sti.csv");
            write_score_csv(sti_file, split.current, ScoreVector{split.sti, false});

            nlohmann::ordered_json manifest;
            manifest["n_current"] = split.current.size();
            manifest["n_future"] = split.future.size();
            manifest["test_ratio"] = split.test_ratio;
            manifest["sti_csv"] = "sti.csv";
            std::ofstream mf(fs::path(output_dir) / "manifest.json");
            mf << manifest.dump(2) << '\n';
            std::fprintf(stderr, "split: n_current=%d n_future=%d\n", split.current.size(),
                         split.future.size());
            return 0;
        }

        // ---- eval --------------------------------------------------
        if (eval_cmd->parsed()) {
            check_inputs_exist(eval_common);
            MethodSpec spec;
            spec.tol = eval_common.tol;
            spec.max_iter = eval_common.max_iter;
            if (eval_method == "pagerank") {
                spec.kind = MethodSpec::Kind::PageRank;
                spec.pagerank_alpha = eval_at.alpha;
                if (!(spec.pagerank_alpha >= 0.0 && spec.pagerank_alpha < 1.0))
                    throw InvalidParams("pagerank alpha must be in [0, 1)");
            } else if (eval_method == "attrank") {
                spec.kind = MethodSpec::Kind::AttRank;
                spec.attrank = resolve_attrank(eval_at, eval_cmd->count("--gamma") > 0);
            } else if (eval_method == "citerank") {
                spec.kind = MethodSpec::Kind::CiteRank;
                spec.baseline.method = BaselineMethod::CR;
                spec.baseline.cr_alpha = eval_at.alpha;
                spec.baseline.cr_tau_dir = e_cr_tau;
                spec.baseline.validate();
            } else if (eval_method == "futurerank") {
                spec.kind = MethodSpec::Kind::FutureRank;
                spec.baseline.method = BaselineMethod::FR;
                spec.baseline.fr_alpha = eval_at.alpha;
                spec.baseline.fr_beta = eval_at.beta;
                spec.baseline.fr_gamma = eval_at.gamma;
                spec.baseline.fr_rho = e_fr.rho;
                spec.baseline.validate();
            } else if (eval_method == "ram") {
                spec.kind = MethodSpec::Kind::Ram;
                spec.baseline.method = BaselineMethod::RAM;
                spec.baseline.ram_gamma = e_ram_gamma;
                spec.baseline.validate();
            } else if (eval_method == "ecm") {
                spec.kind = MethodSpec::Kind::Ecm;
                spec.baseline.method = BaselineMethod::ECM;
                spec.baseline.ecm_alpha = e_ecm_alpha;
                spec.baseline.ecm_gamma = e_ecm_gamma;
                spec.baseline.validate();
            } else {
                throw InvalidParams("unknown method '" + eval_method + "'");
            }

            if (eval_ks.empty()) eval_ks = {5, 10, 50, 100, 500};
            CitationGraph graph = load_graph_files(eval_common.edges, eval_common.meta);
            SplitView split = temporal_split(graph, eval_ratio);
            EvalReport report = evaluate(spec, split, eval_ks, !include_zero_truth);
            Sink sink(eval_common.output);
            sink.stream() << report.to_json() << '\n';
            print_run_stats(report.method, report.iterations, report.runtime_ms);
            return 0;
        }

        // ---- sweep -------------------------------------------------
        if (sweep_cmd->parsed()) {
            check_inputs_exist(sweep_common);
            SweepGrid grid;
            if (sweep_method == "attrank")
                grid = attrank_grid(sweep_eta, attention_mode_from_string(sweep_mode));
            else
                grid = baseline_grid(baseline_method_from_string(sweep_method));
            grid.tol = sweep_common.tol;
            grid.max_iter = sweep_common.max_iter;

            CitationGraph graph = load_graph_files(sweep_common.edges, sweep_common.meta);
            SplitView split = temporal_split(graph, sweep_ratio);
            SweepResult result =
                sweep(grid, split, sweep_metric, sweep_k, !sweep_include_zero, sweep_jobs);
            Sink sink(sweep_common.output);
            write_sweep_csv(sink.stream(), result);
            if (result.best_index >= 0) {
                const SweepRow& best = result.rows[static_cast<std::size_t>(result.best_index)];
                std::fprintf(stderr, "best cell:");
                for (std::size_t i = 0; i < result.columns.size(); ++i)
                    std::fprintf(stderr, " %s=%g", result.columns[i].c_str(), best.params[i]);
                std::fprintf(stderr, " %s=%.6f\n", result.metric_label.c_str(), best.value);
            }
            return 0;
        }

        // ---- fit-eta -----------------------------------------------
        if (fit_cmd->parsed()) {
            check_inputs_exist(fit_common);
            CitationGraph graph = load_graph_files(fit_common.edges, fit_common.meta);
            std::vector<double> dist;
            if (fit_on_current) {
                SplitView split = temporal_split(graph, fit_ratio);
                dist = citation_age_distribution(split.current, max_age);
            } else {
                dist = citation_age_distribution(graph, max_age);
            }
            int start = tail_start;
            if (start < 0) {
                start = static_cast<int>(
                    std::max_element(dist.begin(), dist.end()) - dist.begin());
            }
            double eta = fit_eta(dist, start);
            std::printf("%.6g\n", eta);
            std::fprintf(stderr, "fit-eta: tail_start=%d buckets=%zu\n", start, dist.size());
            return 0;
        }
    } catch (const InvalidParams& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.kind().c_str(), e.what());
        return kExitConfig;
    } catch (const RatioOutOfRange& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.kind().c_str(), e.what());
        return kExitConfig;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.kind().c_str(), e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return 0;
}
