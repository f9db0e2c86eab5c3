#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "impactrank/corpus.hpp"
#include "impactrank/errors.hpp"

namespace impactrank {

// Per-paper nonnegative scores. `normalized` marks vectors known to sum
// to 1 (distributions); raw counts and series sums leave it false.
struct ScoreVector {
    std::vector<double> values;
    bool normalized = false;

    double sum() const;
    void normalize();  // divides by sum(); throws DegenerateInput if sum <= 0
};

// Probability distribution over papers (sum 1, entries >= 0).
struct TeleportVector {
    std::vector<double> values;

    static TeleportVector uniform(int n);
    // Normalizes raw nonnegative weights; throws InvalidParams on
    // negative entries or zero total mass.
    static TeleportVector from_weights(std::vector<double> weights);
};

void validate_teleport(const TeleportVector& u);

// Column-stochastic operator S over a graph view: column j is uniform
// over j's in-view references, or uniform over all n papers when j has
// none (dangling). Columns are never materialized; matvec applies the
// dangling rule on the fly.
class TransitionView {
public:
    explicit TransitionView(GraphView view);

    const GraphView& view() const { return view_; }
    int size() const { return view_.size(); }
    int out_degree(int j) const { return out_degree_[static_cast<std::size_t>(j)]; }
    std::span<const int> dangling() const { return dangling_; }

private:
    GraphView view_;
    std::vector<int> out_degree_;  // in-view reference counts
    std::vector<int> dangling_;
};

// y = S x, scattering x[j]/k_j to the references of j and spreading the
// dangling mass uniformly. Preserves sum(x).
ScoreVector matvec(const TransitionView& S, const ScoreVector& x);

struct PowerIterationResult {
    ScoreVector scores;
    int iterations = 0;
    std::vector<double> residuals;  // L1 residual after each iteration
};

// Power iteration for v = alpha S v + (1-alpha) u, started at v0 = u,
// stopped when the L1 residual drops below tol.
PowerIterationResult pagerank(const TransitionView& S, const TeleportVector& u, double alpha,
                              double tol = 1e-12, int max_iter = 200);

// Explicit dense S for test-scale instances (n <= 2000).
Eigen::MatrixXd dense_transition_matrix(const TransitionView& S);

// Solves (I - alpha S) x = b by dense LU. The fixed-point solves below
// are exact up to machine precision, independent of the power iteration.
Eigen::VectorXd dense_fixed_point(const Eigen::MatrixXd& S, const Eigen::VectorXd& b,
                                  double alpha);

// Closed-form PageRank via dense linear solve of (I - alpha S) v =
// (1-alpha) u. Test-scale oracle.
ScoreVector pagerank_dense_oracle(const Eigen::MatrixXd& S, const TeleportVector& u, double alpha);

// Adjusted teleport vector folding m incoming-edge-free trailing papers
// into the first n: adj = u_[n] + alpha * sum_i u_{n+i} S_{[n],n+i}.
// `values` is unnormalized; its sum is `mass` = 1 - (1-alpha) * sum_i u_{n+i}.
struct AdjustedTeleport {
    std::vector<double> values;
    double mass;
};
AdjustedTeleport adjusted_teleport(const TransitionView& S_full, const TeleportVector& u_full,
                                   double alpha, int n);

// PageRank of the first n papers computed without touching the trailing
// papers: mass * pagerank(S_[n], adj/mass, alpha). Equals the first n
// entries of the PageRank of the grown network under the block
// operator the contraction identity assumes: the first n columns keep their
// prefix-state semantics (a dangling prefix paper smears over the
// prefix only), the trailing papers' scores are (1-alpha) u_{n+i}.
// The returned scores sum to `mass`, not 1.
PowerIterationResult contracted_pagerank(const TransitionView& S_full,
                                         const TeleportVector& u_full, double alpha, int n,
                                         double tol = 1e-12, int max_iter = 200);

// Score CSV: `paper_id,score` sorted by descending score, ties by
// ascending paper id, 17-significant-digit floats.
void write_score_csv(std::ostream& out, const GraphView& view, const ScoreVector& scores);

}  // namespace impactrank
