#include "impactrank/attrank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace impactrank {

AttentionMode attention_mode_from_string(const std::string& s) {
    if (s == "count_fraction") return AttentionMode::CountFraction;
    if (s == "weighted_reference") return AttentionMode::WeightedReference;
    throw InvalidParams("unknown attention mode '" + s +
                        "' (expected count_fraction or weighted_reference)");
}

const char* to_string(AttentionMode mode) {
    return mode == AttentionMode::CountFraction ? "count_fraction" : "weighted_reference";
}

void AttRankParams::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(alpha) || !in_unit(beta) || !in_unit(gamma))
        throw InvalidParams("alpha, beta, gamma must lie in [0, 1]");
    if (std::abs(alpha + beta + gamma - 1.0) > 1e-12)
        throw InvalidParams("alpha + beta + gamma must equal 1");
    if (alpha >= 1.0) throw InvalidParams("alpha must be < 1 for the walk to contract");
    if (!(eta <= 0.0)) throw InvalidParams("eta must be <= 0");
    if (y < 1) throw InvalidParams("attention window y must be >= 1");
}

namespace {

// First index of the window (newest_year - y, newest_year]; papers are
// sorted by time, so the window is a suffix of the view.
int window_begin(const GraphView& g, int y) {
    const int cutoff = g.newest_year() - y;  // window = years strictly greater
    int lo = 0, hi = g.size();
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (g.pub_year(mid) > cutoff)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

}  // namespace

std::vector<double> attention_counts(const GraphView& g, int y, AttentionMode mode) {
    if (y < 1) throw InvalidParams("attention window y must be >= 1");
    std::vector<double> counts(static_cast<std::size_t>(g.size()), 0.0);
    const int begin = window_begin(g, y);
    const int newest = g.newest_year();
    for (int j = begin; j < g.size(); ++j) {
        auto refs = g.references(j);
        if (refs.empty()) continue;
        double weight = 1.0;
        if (mode == AttentionMode::WeightedReference)
            weight = static_cast<double>(y - (newest - g.pub_year(j))) /
                     static_cast<double>(refs.size());
        for (int i : refs) counts[static_cast<std::size_t>(i)] += weight;
    }
    return counts;
}

TeleportVector attention_vector(const GraphView& g, int y, AttentionMode mode) {
    std::vector<double> counts = attention_counts(g, y, mode);
    double total = 0.0;
    for (double c : counts) total += c;
    if (!(total > 0.0))
        throw EmptyWindow("no citations originate in the last " + std::to_string(y) +
                          " year(s) of the view");
    return TeleportVector::from_weights(std::move(counts));
}

TeleportVector recency_vector(const GraphView& g, double eta) {
    if (!(eta <= 0.0)) throw InvalidParams("eta must be <= 0");
    const int newest = g.newest_year();
    std::vector<double> weights(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i)
        weights[static_cast<std::size_t>(i)] = std::exp(eta * static_cast<double>(newest - g.pub_year(i)));
    return TeleportVector::from_weights(std::move(weights));
}

double fit_eta(std::span<const double> dist, int tail_start) {
    if (tail_start < 0) throw InvalidParams("tail_start must be >= 0");
    // Least squares of log p over (age, log p) pairs with p > 0.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int points = 0;
    for (std::size_t age = static_cast<std::size_t>(tail_start); age < dist.size(); ++age) {
        if (!(dist[age] > 0.0)) continue;
        const double x = static_cast<double>(age);
        const double ly = std::log(dist[age]);
        sx += x;
        sy += ly;
        sxx += x * x;
        sxy += x * ly;
        ++points;
    }
    if (points < 3)
        throw InsufficientTail("exponential tail fit needs >= 3 positive buckets, got " +
                               std::to_string(points));
    const double denom = static_cast<double>(points) * sxx - sx * sx;
    if (denom == 0.0) throw InsufficientTail("tail buckets share a single age");
    return (static_cast<double>(points) * sxy - sx * sy) / denom;
}

PowerIterationResult attrank_solve(const GraphView& g, const AttRankParams& params, double tol,
                                   int max_iter) {
    params.validate();
    if (g.size() < 1) throw EmptyGraph("attrank_solve on an empty view");
    if (max_iter < 1) throw InvalidParams("attrank max_iter must be >= 1");

    const int n = g.size();
    TransitionView S(g);

    // Combined teleport term beta*A + gamma*T, fixed across iterations.
    std::vector<double> jump(static_cast<std::size_t>(n), 0.0);
    if (params.beta > 0.0) {
        TeleportVector att = attention_vector(g, params.y, params.attention_mode);
        for (int i = 0; i < n; ++i)
            jump[static_cast<std::size_t>(i)] += params.beta * att.values[static_cast<std::size_t>(i)];
    }
    if (params.gamma > 0.0) {
        TeleportVector rec = recency_vector(g, params.eta);
        for (int i = 0; i < n; ++i)
            jump[static_cast<std::size_t>(i)] += params.gamma * rec.values[static_cast<std::size_t>(i)];
    }

    PowerIterationResult result;
    std::vector<double> v(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    std::vector<double> next(v.size());
    for (int iter = 1; iter <= max_iter; ++iter) {
        double residual;
        if (params.alpha == 0.0) {
            // One update lands exactly on the fixed point.
            next = jump;
            residual = 0.0;
        } else {
            ScoreVector sx = matvec(S, ScoreVector{v, false});
            next = std::move(sx.values);
            for (std::size_t i = 0; i < next.size(); ++i)
                next[i] = params.alpha * next[i] + jump[i];
            residual = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) residual += std::abs(next[i] - v[i]);
        }
        result.residuals.push_back(residual);
        v.swap(next);
        result.iterations = iter;
        if (residual < tol) {
            result.scores = ScoreVector{std::move(v), true};
            return result;
        }
    }
    char msg[96];
    std::snprintf(msg, sizeof(msg), "attrank did not converge in %d iterations, residual %.3g",
                  max_iter, result.residuals.back());
    const double last = result.residuals.back();
    throw NoConvergence(msg, last, max_iter, std::move(result.residuals));
}

}  // namespace impactrank
