#include "impactrank/walkcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <Eigen/LU>

namespace impactrank {

double ScoreVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

void ScoreVector::normalize() {
    double s = sum();
    if (!(s > 0.0)) throw DegenerateInput("cannot normalize score vector with sum <= 0");
    for (double& v : values) v /= s;
    normalized = true;
}

TeleportVector TeleportVector::uniform(int n) {
    TeleportVector u;
    u.values.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    return u;
}

TeleportVector TeleportVector::from_weights(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw InvalidParams("teleport weights must be finite and nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw InvalidParams("teleport weights sum to zero");
    for (double& w : weights) w /= total;
    return TeleportVector{std::move(weights)};
}

void validate_teleport(const TeleportVector& u) {
    double total = 0.0;
    for (double v : u.values) {
        if (v < 0.0 || !std::isfinite(v)) throw InvalidParams("teleport entry negative or non-finite");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InvalidParams("teleport vector sums to " + std::to_string(total) + ", expected 1");
}

TransitionView::TransitionView(GraphView view) : view_(view) {
    out_degree_.resize(static_cast<std::size_t>(view_.size()));
    for (int j = 0; j < view_.size(); ++j) {
        int k = static_cast<int>(view_.references(j).size());
        out_degree_[static_cast<std::size_t>(j)] = k;
        if (k == 0) dangling_.push_back(j);
    }
}

namespace {

void apply_transition(const TransitionView& S, std::span<const double> x, std::span<double> y) {
    const GraphView& view = S.view();
    const int n = S.size();
    std::fill(y.begin(), y.end(), 0.0);
    double dangling_mass = 0.0;
    for (int j : S.dangling()) dangling_mass += x[static_cast<std::size_t>(j)];
    for (int j = 0; j < n; ++j) {
        const int k = S.out_degree(j);
        if (k == 0) continue;
        const double share = x[static_cast<std::size_t>(j)] / static_cast<double>(k);
        for (int i : view.references(j)) y[static_cast<std::size_t>(i)] += share;
    }
    if (dangling_mass != 0.0) {
        const double smear = dangling_mass / static_cast<double>(n);
        for (double& v : y) v += smear;
    }
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d;
}

}  // namespace

ScoreVector matvec(const TransitionView& S, const ScoreVector& x) {
    if (static_cast<int>(x.values.size()) != S.size())
        throw DimensionMismatch("matvec: vector length " + std::to_string(x.values.size()) +
                                " vs operator size " + std::to_string(S.size()));
    ScoreVector y;
    y.values.resize(x.values.size());
    y.normalized = x.normalized;
    apply_transition(S, x.values, y.values);
    return y;
}

PowerIterationResult pagerank(const TransitionView& S, const TeleportVector& u, double alpha,
                              double tol, int max_iter) {
    if (static_cast<int>(u.values.size()) != S.size())
        throw DimensionMismatch("pagerank: teleport length vs operator size");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidParams("pagerank alpha must be in [0, 1)");
    if (max_iter < 1) throw InvalidParams("pagerank max_iter must be >= 1");
    validate_teleport(u);

    PowerIterationResult result;
    std::vector<double> v = u.values;
    std::vector<double> next(v.size());
    for (int iter = 1; iter <= max_iter; ++iter) {
        apply_transition(S, v, next);
        for (std::size_t i = 0; i < v.size(); ++i)
            next[i] = alpha * next[i] + (1.0 - alpha) * u.values[i];
        double residual = l1_distance(next, v);
        result.residuals.push_back(residual);
        v.swap(next);
        result.iterations = iter;
        if (residual < tol) {
            result.scores = ScoreVector{std::move(v), true};
            return result;
        }
    }
    char msg[96];
    std::snprintf(msg, sizeof(msg), "pagerank did not converge in %d iterations, residual %.3g",
                  max_iter, result.residuals.back());
    const double last = result.residuals.back();
    throw NoConvergence(msg, last, max_iter, std::move(result.residuals));
}

Eigen::MatrixXd dense_transition_matrix(const TransitionView& S) {
    const int n = S.size();
    if (n > 2000) throw DimensionMismatch("dense transition matrix capped at n <= 2000");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        const int k = S.out_degree(j);
        if (k == 0) {
            M.col(j).setConstant(1.0 / static_cast<double>(n));
        } else {
            for (int i : S.view().references(j)) M(i, j) = 1.0 / static_cast<double>(k);
        }
    }
    return M;
}

Eigen::VectorXd dense_fixed_point(const Eigen::MatrixXd& S, const Eigen::VectorXd& b,
                                  double alpha) {
    const auto n = S.rows();
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - alpha * S;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    // I - alpha S is strictly diagonally dominant by columns for alpha <
    // 1, hence invertible.
    if (std::abs(lu.determinant()) == 0.0)
        throw SingularSystem("dense fixed-point system is singular");
    return lu.solve(b);
}

ScoreVector pagerank_dense_oracle(const Eigen::MatrixXd& S, const TeleportVector& u,
                                  double alpha) {
    if (S.rows() != S.cols() || S.rows() != static_cast<Eigen::Index>(u.values.size()))
        throw DimensionMismatch("pagerank_dense_oracle: shape mismatch");
    Eigen::VectorXd b =
        (1.0 - alpha) * Eigen::Map<const Eigen::VectorXd>(u.values.data(),
                                                          static_cast<Eigen::Index>(u.values.size()));
    Eigen::VectorXd v = dense_fixed_point(S, b, alpha);
    ScoreVector out;
    out.values.assign(v.data(), v.data() + v.size());
    out.normalized = true;
    return out;
}

AdjustedTeleport adjusted_teleport(const TransitionView& S_full, const TeleportVector& u_full,
                                   double alpha, int n) {
    const int total = S_full.size();
    if (n < 0 || n > total) throw DimensionMismatch("adjusted_teleport: bad prefix size");
    if (static_cast<int>(u_full.values.size()) != total)
        throw DimensionMismatch("adjusted_teleport: teleport length vs operator size");
    validate_teleport(u_full);

    const GraphView& view = S_full.view();
    for (int p = n; p < total; ++p) {
        if (!view.citations(p).empty())
            throw ContractionPreconditionViolated("future paper " + view.external_id(p) +
                                                  " is cited");
        auto refs = view.references(p);
        if (refs.empty())
            throw ContractionPreconditionViolated(
                "future paper " + view.external_id(p) +
                " is dangling; its implicit column reaches future papers");
        if (refs.back() >= n)
            throw ContractionPreconditionViolated("future paper " + view.external_id(p) +
                                                  " cites another future paper");
    }

    AdjustedTeleport adj;
    adj.values.assign(u_full.values.begin(), u_full.values.begin() + n);
    double future_teleport = 0.0;
    for (int p = n; p < total; ++p) {
        const double up = u_full.values[static_cast<std::size_t>(p)];
        future_teleport += up;
        auto refs = view.references(p);
        const double share = alpha * up / static_cast<double>(refs.size());
        for (int i : refs) adj.values[static_cast<std::size_t>(i)] += share;
    }
    adj.mass = 1.0 - (1.0 - alpha) * future_teleport;
    return adj;
}

PowerIterationResult contracted_pagerank(const TransitionView& S_full,
                                         const TeleportVector& u_full, double alpha, int n,
                                         double tol, int max_iter) {
    AdjustedTeleport adj = adjusted_teleport(S_full, u_full, alpha, n);
    TeleportVector u_n = TeleportVector::from_weights(adj.values);
    TransitionView S_n(S_full.view().prefix(n));
    PowerIterationResult result = pagerank(S_n, u_n, alpha, tol, max_iter);
    for (double& v : result.scores.values) v *= adj.mass;
    result.scores.normalized = false;
    return result;
}

void write_score_csv(std::ostream& out, const GraphView& view, const ScoreVector& scores) {
    if (static_cast<int>(scores.values.size()) != view.size())
        throw DimensionMismatch("score CSV: vector length vs view size");
    std::vector<int> order(scores.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double sa = scores.values[static_cast<std::size_t>(a)];
        double sb = scores.values[static_cast<std::size_t>(b)];
        if (sa != sb) return sa > sb;
        return view.external_id(a) < view.external_id(b);
    });
    out << "paper_id,score\n";
    char buf[40];
    for (int i : order) {
        std::snprintf(buf, sizeof(buf), "%.17g", scores.values[static_cast<std::size_t>(i)]);
        out << view.external_id(i) << ',' << buf << '\n';
    }
}

}  // namespace impactrank
