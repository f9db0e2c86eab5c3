#pragma once

#include <span>
#include <string>

#include "impactrank/corpus.hpp"
#include "impactrank/walkcore.hpp"

namespace impactrank {

// How the attention teleport is estimated from the recent window.
//   CountFraction:     fraction of all citations made by window papers
//                      that each paper received (default; the tuning
//                      grids are defined over this form).
//   WeightedReference: reference-normalized columns of the window
//                      papers, weighted linearly by recency (newest
//                      year gets weight y, oldest in-window year 1);
//                      dangling window papers contribute nothing.
enum class AttentionMode { CountFraction, WeightedReference };

AttentionMode attention_mode_from_string(const std::string& s);
const char* to_string(AttentionMode mode);

struct AttRankParams {
    double alpha = 0.2;  // reference-following probability
    double beta = 0.4;   // attention-teleport probability
    double gamma = 0.4;  // recency-teleport probability
    double eta = 0.0;    // recency decay exponent, <= 0 (0 = uniform)
    int y = 3;           // attention window length in years
    AttentionMode attention_mode = AttentionMode::CountFraction;

    void validate() const;  // throws InvalidParams
};

// Unnormalized attention weights over the view; the window covers
// citing papers published in (newest_year - y, newest_year].
std::vector<double> attention_counts(const GraphView& g, int y, AttentionMode mode);

// Normalized attention teleport. Throws EmptyWindow when no citation
// originates in the window.
TeleportVector attention_vector(const GraphView& g, int y, AttentionMode mode);

// Recency teleport u_i proportional to e^(eta * age_i), ages in years
// from the newest paper in the view. eta = 0 gives the uniform vector.
TeleportVector recency_vector(const GraphView& g, double eta);

// Least-squares slope of log p(age) over the tail buckets (age >=
// tail_start, p > 0). Needs at least 3 positive tail points.
double fit_eta(std::span<const double> dist, int tail_start);

// Fixed-point iteration for y = alpha S y + beta A + gamma T from the
// uniform start. alpha = 0 yields the exact solution in one iteration.
// The attention vector is only computed (and EmptyWindow only raised)
// when beta > 0.
PowerIterationResult attrank_solve(const GraphView& g, const AttRankParams& params,
                                   double tol = 1e-12, int max_iter = 200);

}  // namespace impactrank
