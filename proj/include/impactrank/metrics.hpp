#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "impactrank/corpus.hpp"

namespace impactrank {

// Spearman rank correlation with average ranks for ties. With
// exclude_zero_truth, papers whose ground truth is 0 are dropped first.
// Throws DegenerateInput when fewer than 2 papers remain or either rank
// vector is constant (the correlation is undefined, not 0).
double spearman_rho(std::span<const double> scores, std::span<const double> ground_truth,
                    bool exclude_zero_truth);

// Indices ordered by descending score; ties broken by ascending index.
std::vector<int> ranking_from_scores(std::span<const double> scores);

// nDCG@k with linear gains: DCG@k = sum_{i<=k} rel(ranking[i]) /
// log2(i+1), normalized by the DCG of rel sorted descending. Throws
// ZeroIdeal when every relevance is 0.
double ndcg_at_k(std::span<const int> ranking, std::span<const double> rel, int k);

// How many of the top_k papers by STI were already "recently popular":
// among the top_k by citations received from the last y years of the
// current view. Returns 0 on degenerate inputs (e.g. zero STI mass).
int recently_popular_overlap(const SplitView& split, int y, int top_k);

struct EvalReport {
    std::string method;
    std::map<std::string, double> params;
    double spearman = 0.0;
    std::map<int, double> ndcg;
    int n_evaluated = 0;
    bool exclude_zero_truth = true;
    int iterations = 0;
    double runtime_ms = 0.0;
    std::string error;  // empty on success

    // One JSON object: {method, params, spearman, ndcg: {"5": ...},
    // n_evaluated, exclude_zero_truth, iterations, runtime_ms[, error]}.
    std::string to_json() const;
};

}  // namespace impactrank
