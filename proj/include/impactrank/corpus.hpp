#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "impactrank/errors.hpp"

namespace impactrank {

struct LoadStats {
    std::uint64_t dropped_impossible = 0;  // citing paper older than cited
    std::uint64_t dropped_self = 0;
    std::uint64_t dropped_duplicate = 0;
};

// Immutable citation network. Internal indices are sorted by publication
// time (ties broken by external id), so index order is publication order
// and every prefix [0, n) is a valid past state of the network.
//
// pub_time is either a plain year or a yyyymmdd-coded date; both sort
// correctly as integers. pub_year() extracts the year in either case.
class CitationGraph {
public:
    CitationGraph() = default;

    // Record-stream construction (ids are opaque strings).
    struct MetaRecord {
        std::string id;
        int pub_time = 0;
        std::vector<std::string> authors;
    };
    struct EdgeRecord {
        std::string citing;
        std::string cited;
    };
    static CitationGraph from_records(std::vector<MetaRecord> meta,
                                      const std::vector<EdgeRecord>& edges);

    int paper_count() const { return n_; }
    int pub_time(int i) const { return pub_time_[i]; }
    int pub_year(int i) const {
        int t = pub_time_[i];
        return t >= 10000 ? t / 10000 : t;
    }

    // References of j (papers j cites) and citations of i (papers citing
    // i); both sorted ascending by internal index.
    std::span<const int> references(int j) const {
        return {ref_tgt_.data() + ref_off_[j], ref_off_[j + 1] - ref_off_[j]};
    }
    std::span<const int> citations(int i) const {
        return {cit_src_.data() + cit_off_[i], cit_off_[i + 1] - cit_off_[i]};
    }

    const std::string& external_id(int i) const { return ids_[i]; }
    std::optional<int> index_of(const std::string& external_id) const;

    bool has_authors() const { return author_count_ > 0; }
    int author_count() const { return author_count_; }
    std::span<const int> authors_of(int i) const {
        return {auth_ids_.data() + auth_off_[i], auth_off_[i + 1] - auth_off_[i]};
    }

    const LoadStats& load_stats() const { return stats_; }

private:
    int n_ = 0;
    std::vector<int> pub_time_;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::size_t> ref_off_{0};
    std::vector<int> ref_tgt_;
    std::vector<std::size_t> cit_off_{0};
    std::vector<int> cit_src_;
    std::vector<std::size_t> auth_off_{0};
    std::vector<int> auth_ids_;
    int author_count_ = 0;
    LoadStats stats_;
};

// Prefix view over the first n papers: exactly the network state after
// the n-th publication. All accessors are clamped to the view, so code
// holding a view cannot observe future papers or future edges.
class GraphView {
public:
    GraphView(const CitationGraph& g, int n);

    int size() const { return n_; }
    const CitationGraph& graph() const { return *g_; }
    GraphView prefix(int n) const { return GraphView(*g_, n); }

    int pub_time(int i) const { return g_->pub_time(i); }
    int pub_year(int i) const { return g_->pub_year(i); }
    int newest_year() const { return n_ > 0 ? g_->pub_year(n_ - 1) : 0; }
    const std::string& external_id(int i) const { return g_->external_id(i); }
    std::span<const int> authors_of(int i) const { return g_->authors_of(i); }

    // Adjacency restricted to the view. Lists are ascending, so the
    // in-view part is a prefix of the full list.
    std::span<const int> references(int j) const { return clamp(g_->references(j)); }
    std::span<const int> citations(int i) const { return clamp(g_->citations(i)); }

    std::size_t edge_count() const;

private:
    std::span<const int> clamp(std::span<const int> full) const;

    const CitationGraph* g_;
    int n_;
};

// Current/future pair of prefix views plus the short-term-impact ground
// truth: sti[i] = citations to i from papers in [n_current, n_future).
struct SplitView {
    GraphView current;
    GraphView future;
    double test_ratio;
    std::vector<double> sti;
};

// Parsers for the on-disk formats. Edge file: `citing<TAB>cited` per
// line. Metadata file: `id<TAB>year_or_ISO-date[<TAB>author(;author)*]`.
// Lines starting with '#' are comments.
CitationGraph load_graph(std::istream& edge_source, std::istream& meta_source);
CitationGraph load_graph_files(const std::string& edge_path, const std::string& meta_path);

// current = oldest floor(n/2) papers, future = oldest floor(ratio *
// n_current), capped at n. Ratio must lie in [1, 2].
SplitView temporal_split(const CitationGraph& g, double test_ratio);

// Empirical distribution of citation age (pub_year(citing) -
// pub_year(cited)) over ages 0..max_age; citations older than max_age
// are discarded before normalizing.
std::vector<double> citation_age_distribution(const GraphView& g, int max_age);
inline std::vector<double> citation_age_distribution(const CitationGraph& g, int max_age) {
    return citation_age_distribution(GraphView(g, g.paper_count()), max_age);
}

}  // namespace impactrank
