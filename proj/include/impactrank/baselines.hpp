#pragma once

#include <string>

#include "impactrank/corpus.hpp"
#include "impactrank/walkcore.hpp"

namespace impactrank {

enum class BaselineMethod { CR, FR, RAM, ECM };

BaselineMethod baseline_method_from_string(const std::string& s);
const char* to_string(BaselineMethod m);

struct BaselineParams {
    BaselineMethod method = BaselineMethod::RAM;
    // CiteRank
    double cr_alpha = 0.5;
    double cr_tau_dir = 2.0;
    // FutureRank
    double fr_alpha = 0.4;
    double fr_beta = 0.1;
    double fr_gamma = 0.5;
    double fr_rho = -0.62;
    // RAM / ECM
    double ram_gamma = 0.5;
    double ecm_alpha = 0.1;
    double ecm_gamma = 0.3;

    void validate() const;  // throws InvalidParams per the tuning ranges
};

// CiteRank traffic T = sum_k alpha^k S^k rho with rho_i proportional to
// e^(-age_i / tau_dir); truncated when the L1 increment drops below tol.
// Returned normalized; iterations = number of series terms after rho.
PowerIterationResult citerank(const GraphView& g, double alpha, double tau_dir,
                              double tol = 1e-12, int max_iter = 200);

struct FutureRankParams {
    double alpha = 0.4;
    double beta = 0.1;
    double gamma = 0.5;
    double rho = -0.62;
};

// Paper/author mutual reinforcement: each round authors collect the
// scores of their papers, papers mix alpha*(S p) + beta*(author
// contribution) + gamma*(recency) + (1-alpha-beta-gamma)*uniform, and
// the paper vector is renormalized. Requires author data when beta > 0.
PowerIterationResult futurerank(const GraphView& g, const FutureRankParams& params,
                                double tol = 1e-12, int max_iter = 200);

// Retained adjacency: score_i = sum over citations (j -> i) of
// gamma^(newest_year - year_j). Single pass; returned normalized.
ScoreVector ram(const GraphView& g, double gamma);

// Effective contagion: score = sum_{k>=1} alpha^(k-1) R^k 1 over the
// age-weighted adjacency R_{i,j} = gamma^(newest_year - year_j) for j
// citing i. Truncated when the L1 increment drops below tol; throws
// NoConvergence if increments are not shrinking by max_k terms.
PowerIterationResult ecm(const GraphView& g, double alpha, double gamma, double tol = 1e-12,
                         int max_k = 200);

}  // namespace impactrank
