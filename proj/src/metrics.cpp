#include "impactrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "impactrank/errors.hpp"

namespace impactrank {

namespace {

// Average ranks (1-based); tied values share the mean of their range.
std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[static_cast<std::size_t>(order[j + 1])] ==
                                values[static_cast<std::size_t>(order[i])])
            ++j;
        const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t)
            ranks[static_cast<std::size_t>(order[t])] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0)
        throw DegenerateInput("rank correlation undefined for a constant ranking");
    // Single sqrt of the product keeps identical/reversed inputs at
    // exactly +/-1.
    return cov / std::sqrt(va * vb);
}

}  // namespace

double spearman_rho(std::span<const double> scores, std::span<const double> ground_truth,
                    bool exclude_zero_truth) {
    if (scores.size() != ground_truth.size())
        throw DimensionMismatch("spearman: score and truth lengths differ");
    std::vector<double> s, t;
    s.reserve(scores.size());
    t.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (exclude_zero_truth && ground_truth[i] == 0.0) continue;
        s.push_back(scores[i]);
        t.push_back(ground_truth[i]);
    }
    if (s.size() < 2)
        throw DegenerateInput("spearman needs at least 2 papers after exclusion, got " +
                              std::to_string(s.size()));
    std::vector<double> rs = average_ranks(s);
    std::vector<double> rt = average_ranks(t);
    return pearson(rs, rt);
}

std::vector<int> ranking_from_scores(std::span<const double> scores) {
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
    });
    return order;
}

double ndcg_at_k(std::span<const int> ranking, std::span<const double> rel, int k) {
    if (k < 1) throw InvalidParams("ndcg k must be >= 1");
    const std::size_t cut = std::min<std::size_t>(static_cast<std::size_t>(k), ranking.size());

    double dcg = 0.0;
    for (std::size_t i = 0; i < cut; ++i)
        dcg += rel[static_cast<std::size_t>(ranking[i])] / std::log2(static_cast<double>(i) + 2.0);

    std::vector<double> ideal(rel.begin(), rel.end());
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    const std::size_t icut = std::min<std::size_t>(static_cast<std::size_t>(k), ideal.size());
    for (std::size_t i = 0; i < icut; ++i)
        idcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);

    if (!(idcg > 0.0)) throw ZeroIdeal("ndcg undefined: every relevance is zero");
    return dcg / idcg;
}

int recently_popular_overlap(const SplitView& split, int y, int top_k) {
    const GraphView& cur = split.current;
    const int n = cur.size();
    if (n == 0 || top_k < 1) return 0;
    double sti_mass = std::accumulate(split.sti.begin(), split.sti.end(), 0.0);
    if (!(sti_mass > 0.0)) return 0;

    // Citations received from papers published in the last y years of
    // the current view.
    std::vector<double> recent(static_cast<std::size_t>(n), 0.0);
    const int cutoff = cur.newest_year() - y;
    for (int j = 0; j < n; ++j) {
        if (cur.pub_year(j) <= cutoff) continue;
        for (int i : cur.references(j)) recent[static_cast<std::size_t>(i)] += 1.0;
    }

    const std::size_t cut = std::min<std::size_t>(static_cast<std::size_t>(top_k),
                                                  static_cast<std::size_t>(n));
    std::vector<int> by_sti = ranking_from_scores(split.sti);
    std::vector<int> by_recent = ranking_from_scores(recent);
    std::vector<char> in_sti_top(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < cut; ++i) in_sti_top[static_cast<std::size_t>(by_sti[i])] = 1;
    int overlap = 0;
    for (std::size_t i = 0; i < cut; ++i)
        if (in_sti_top[static_cast<std::size_t>(by_recent[i])]) ++overlap;
    return overlap;
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j;
    j["method"] = method;
    j["params"] = params;
    j["spearman"] = spearman;
    nlohmann::ordered_json nd;
    for (const auto& [k, v] : ndcg) nd[std::to_string(k)] = v;
    j["ndcg"] = nd;
    j["n_evaluated"] = n_evaluated;
    j["exclude_zero_truth"] = exclude_zero_truth;
    j["iterations"] = iterations;
    j["runtime_ms"] = runtime_ms;
    if (!error.empty()) j["error"] = error;
    return j.dump();
}

}  // namespace impactrank
