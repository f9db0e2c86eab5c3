#pragma once

// Shared fixtures: the 4-paper toy network used across suites, plus
// deterministic random-graph generators for property and oracle tests.

#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "impactrank/corpus.hpp"
#include "impactrank/walkcore.hpp"

namespace testutil {

// External ids are zero-padded so lexicographic id order matches the
// construction order (the same-year tie rule then keeps input order).
inline std::string padded_id(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%05d", i);
    return buf;
}

inline impactrank::CitationGraph make_graph(
    const std::vector<int>& years, const std::vector<std::pair<int, int>>& edges_citing_cited,
    const std::vector<std::vector<std::string>>& authors = {}) {
    std::vector<impactrank::CitationGraph::MetaRecord> meta;
    for (std::size_t i = 0; i < years.size(); ++i) {
        impactrank::CitationGraph::MetaRecord rec;
        rec.id = padded_id(static_cast<int>(i));
        rec.pub_time = years[i];
        if (i < authors.size()) rec.authors = authors[i];
        meta.push_back(std::move(rec));
    }
    std::vector<impactrank::CitationGraph::EdgeRecord> edges;
    for (auto [citing, cited] : edges_citing_cited)
        edges.push_back({padded_id(citing), padded_id(cited)});
    return impactrank::CitationGraph::from_records(std::move(meta), edges);
}

// Spec toy network: papers "1".."4", years 2000..2003, edges 2->1,
// 3->1, 3->2, 4->3 (1-based names; internal indices are 0-based).
inline impactrank::CitationGraph toy_graph() {
    std::vector<impactrank::CitationGraph::MetaRecord> meta;
    for (int i = 0; i < 4; ++i)
        meta.push_back({std::to_string(i + 1), 2000 + i, {}});
    std::vector<impactrank::CitationGraph::EdgeRecord> edges = {
        {"2", "1"}, {"3", "1"}, {"3", "2"}, {"4", "3"}};
    return impactrank::CitationGraph::from_records(std::move(meta), edges);
}

struct RandomGraphOptions {
    int n = 30;
    int max_refs = 5;
    int year_span = 6;
    // Give every paper published in the two newest years at least one
    // reference, so attention windows are never empty.
    bool ensure_recent_citations = false;
};

inline impactrank::CitationGraph random_citation_dag(std::mt19937& rng,
                                                     const RandomGraphOptions& opt) {
    std::vector<int> years(static_cast<std::size_t>(opt.n));
    const int base_year = 2000;
    for (int i = 0; i < opt.n; ++i)
        years[static_cast<std::size_t>(i)] =
            base_year + (i * opt.year_span) / std::max(1, opt.n);
    std::vector<std::pair<int, int>> edges;
    const int newest = years.back();
    for (int i = 1; i < opt.n; ++i) {
        std::uniform_int_distribution<int> ref_count(0, opt.max_refs);
        int k = ref_count(rng);
        if (opt.ensure_recent_citations && years[static_cast<std::size_t>(i)] >= newest - 1)
            k = std::max(k, 1);
        std::uniform_int_distribution<int> pick(0, i - 1);
        for (int r = 0; r < k; ++r) edges.emplace_back(i, pick(rng));
    }
    return make_graph(years, edges);
}

// Stochastic operator assumed by the contraction identity: block form
// with the prefix operator in the top-left corner (a dangling prefix
// paper smears over the prefix only, keeping S_[n] constant as the
// network grows) and the future papers' reference columns beside it.
// The bottom rows are zero, so nothing flows into future papers.
inline Eigen::MatrixXd grown_block_matrix(const impactrank::GraphView& full, int n) {
    const int total = full.size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(total, total);
    impactrank::TransitionView prefix(full.prefix(n));
    M.topLeftCorner(n, n) = impactrank::dense_transition_matrix(prefix);
    for (int p = n; p < total; ++p) {
        auto refs = full.references(p);
        for (int i : refs) M(i, p) = 1.0 / static_cast<double>(refs.size());
    }
    return M;
}

// Plain dense power iteration, kept independent of the library solver.
inline std::vector<double> dense_power_iteration(const Eigen::MatrixXd& S,
                                                 const std::vector<double>& u, double alpha,
                                                 double tol = 1e-14, int max_iter = 100000) {
    Eigen::Map<const Eigen::VectorXd> um(u.data(), static_cast<Eigen::Index>(u.size()));
    Eigen::VectorXd v = um;
    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::VectorXd next = alpha * (S * v) + (1.0 - alpha) * um;
        double moved = (next - v).lpNorm<1>();
        v = next;
        if (moved < tol) break;
    }
    return {v.data(), v.data() + v.size()};
}

// Owns the graph a SplitView points into.
struct SplitFixture {
    std::shared_ptr<impactrank::CitationGraph> graph;
    impactrank::SplitView split;
};

inline SplitFixture random_split(std::mt19937& rng, int n = 60, double ratio = 1.6) {
    auto g = std::make_shared<impactrank::CitationGraph>(random_citation_dag(
        rng, {.n = n, .max_refs = 5, .year_span = 8, .ensure_recent_citations = true}));
    auto split = impactrank::temporal_split(*g, ratio);
    return {std::move(g), std::move(split)};
}

// Growth process with preferential attachment: each new paper cites
// `refs_per_paper` targets picked from the endpoint pool (rich get
// richer), spread over `years_span` years.
inline impactrank::CitationGraph preferential_attachment_graph(int n, int refs_per_paper,
                                                               int years_span,
                                                               unsigned seed = 42) {
    std::mt19937 rng(seed);
    std::vector<int> years(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        years[static_cast<std::size_t>(i)] = 2000 + (i * years_span) / n;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> pool;  // one entry per citation received, plus seeds
    pool.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(refs_per_paper) * 2);
    pool.push_back(0);
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        std::uniform_int_distribution<int> any(0, i - 1);
        for (int r = 0; r < refs_per_paper; ++r) {
            // Mix preferential and uniform attachment so young papers
            // keep receiving some citations.
            int target = (r % 4 == 3) ? any(rng) : pool[pick(rng)];
            if (target >= i) target = any(rng);
            edges.emplace_back(i, target);
            pool.push_back(target);
        }
        pool.push_back(i);
    }
    return make_graph(years, edges);
}

}  // namespace testutil
