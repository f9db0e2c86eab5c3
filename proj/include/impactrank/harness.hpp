#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "impactrank/attrank.hpp"
#include "impactrank/baselines.hpp"
#include "impactrank/corpus.hpp"
#include "impactrank/metrics.hpp"
#include "impactrank/walkcore.hpp"

namespace impactrank {

// A runnable method plus its parameters.
struct MethodSpec {
    enum class Kind { PageRank, AttRank, CiteRank, FutureRank, Ram, Ecm };

    Kind kind = Kind::AttRank;
    double pagerank_alpha = 0.5;
    AttRankParams attrank;
    BaselineParams baseline;
    double tol = 1e-12;
    int max_iter = 200;

    std::string name() const;
    std::map<std::string, double> param_map() const;
};

struct RankOutcome {
    ScoreVector scores;
    int iterations = 0;
    std::vector<double> residuals;
};

RankOutcome run_method(const MethodSpec& spec, const GraphView& current);

// Runs a method on the current view only (the view cannot reach future
// papers or edges) and scores the ranking against the split's STI.
using MethodFn = std::function<RankOutcome(const GraphView&)>;
EvalReport evaluate(const std::string& name, const MethodFn& method, const SplitView& split,
                    std::span<const int> ks, bool exclude_zero_truth);
EvalReport evaluate(const MethodSpec& spec, const SplitView& split, std::span<const int> ks,
                    bool exclude_zero_truth);

// Inclusive [min, max] with the given step; values are enumerated by
// index so repeated steps cannot drift.
struct ParamRange {
    std::string name;
    double min;
    double max;
    double step;

    int count() const;
    double value(int index) const;
};

// Cartesian grid over the ranges, filtered by an optional constraint;
// enumeration order is row-major in declaration order.
struct SweepGrid {
    std::string method;
    std::vector<ParamRange> ranges;
    std::function<bool(std::span<const double>)> constraint;

    // Fixed knobs shared by every cell.
    double eta = 0.0;
    AttentionMode attention_mode = AttentionMode::CountFraction;
    double tol = 1e-12;
    int max_iter = 200;

    std::vector<std::vector<double>> cells() const;
    MethodSpec make_spec(std::span<const double> cell) const;
};

// Tuning grids: attrank over alpha/beta/gamma/y with the sum-to-one
// constraint, baselines over their per-method ranges.
SweepGrid attrank_grid(double eta, AttentionMode mode = AttentionMode::CountFraction);
SweepGrid baseline_grid(BaselineMethod method);

struct SweepRow {
    std::vector<double> params;
    double value = 0.0;       // NaN when the cell failed
    std::string error;        // error kind for failed cells
};

struct SweepResult {
    std::vector<std::string> columns;  // parameter column names
    std::string metric_label;          // "spearman" or "ndcg@k"
    std::vector<SweepRow> rows;        // one per cell, grid order
    int best_index = -1;               // argmax over non-failed cells
};

// Evaluates every cell (metric = "spearman" or "ndcg") with up to
// `jobs` cells in flight; output order and content are independent of
// the job count. Failed cells become NaN rows and never abort the run.
SweepResult sweep(const SweepGrid& grid, const SplitView& split, const std::string& metric,
                  int k, bool exclude_zero_truth, int jobs);

// Long-format CSV: `<params...>,metric,value,error`, '\n' endings.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

struct ConvergenceReport {
    int iterations = 0;
    std::vector<double> residuals;
};

// Iteration count and residual trace of an iterative method on the
// split's current view.
ConvergenceReport convergence_report(const MethodSpec& spec, const SplitView& split);

}  // namespace impactrank
