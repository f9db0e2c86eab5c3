#include "impactrank/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace impactrank {

namespace {

bool parse_int(std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

// Accepts a plain integer year or an ISO date YYYY-MM-DD (stored as
// yyyymmdd). Mixing the two granularities in one file would break the
// temporal order, so the caller checks for that.
bool parse_pub_time(std::string_view s, int& out, bool& is_date) {
    if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
        int y, m, d;
        if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m) ||
            !parse_int(s.substr(8, 2), d))
            return false;
        if (m < 1 || m > 12 || d < 1 || d > 31) return false;
        out = y * 10000 + m * 100 + d;
        is_date = true;
        return true;
    }
    is_date = false;
    return parse_int(s, out) && out >= 0 && out < 10000;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

CitationGraph CitationGraph::from_records(std::vector<MetaRecord> meta,
                                          const std::vector<EdgeRecord>& edges) {
    CitationGraph g;
    const int n = static_cast<int>(meta.size());
    g.n_ = n;

    // Temporal order: (pub_time, external id).
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (meta[a].pub_time != meta[b].pub_time) return meta[a].pub_time < meta[b].pub_time;
        return meta[a].id < meta[b].id;
    });

    g.pub_time_.resize(n);
    g.ids_.resize(n);
    g.index_.reserve(static_cast<std::size_t>(n) * 2);
    for (int i = 0; i < n; ++i) {
        const MetaRecord& r = meta[order[i]];
        g.pub_time_[i] = r.pub_time;
        g.ids_[i] = r.id;
        if (!g.index_.emplace(r.id, i).second)
            throw MalformedRecord("duplicate paper id '" + r.id + "' in metadata");
    }

    // Author ids interned in first-seen order over the temporally sorted
    // papers, so the numbering is deterministic. Repeats within one
    // paper's list collapse to one credit.
    std::unordered_map<std::string, int> author_index;
    g.auth_off_.assign(1, 0);
    for (int i = 0; i < n; ++i) {
        const std::size_t begin = g.auth_ids_.size();
        for (const std::string& a : meta[order[i]].authors) {
            auto [it, inserted] = author_index.emplace(a, static_cast<int>(author_index.size()));
            g.auth_ids_.push_back(it->second);
        }
        std::sort(g.auth_ids_.begin() + static_cast<std::ptrdiff_t>(begin), g.auth_ids_.end());
        g.auth_ids_.erase(std::unique(g.auth_ids_.begin() + static_cast<std::ptrdiff_t>(begin),
                                      g.auth_ids_.end()),
                          g.auth_ids_.end());
        g.auth_off_.push_back(g.auth_ids_.size());
    }
    g.author_count_ = static_cast<int>(author_index.size());

    // Map edges to internal indices, dropping self citations and
    // impossible ones (citing paper strictly older than cited).
    std::vector<std::pair<int, int>> mapped;  // (citing, cited)
    mapped.reserve(edges.size());
    for (const EdgeRecord& e : edges) {
        auto ci = g.index_.find(e.citing);
        if (ci == g.index_.end())
            throw MissingMetadata("edge references unknown paper '" + e.citing + "'");
        auto cd = g.index_.find(e.cited);
        if (cd == g.index_.end())
            throw MissingMetadata("edge references unknown paper '" + e.cited + "'");
        int citing = ci->second, cited = cd->second;
        if (citing == cited) {
            ++g.stats_.dropped_self;
            continue;
        }
        if (g.pub_time_[citing] < g.pub_time_[cited]) {
            ++g.stats_.dropped_impossible;
            continue;
        }
        mapped.emplace_back(citing, cited);
    }
    std::sort(mapped.begin(), mapped.end());
    auto last = std::unique(mapped.begin(), mapped.end());
    g.stats_.dropped_duplicate = static_cast<std::uint64_t>(mapped.end() - last);
    mapped.erase(last, mapped.end());

    // CSR, adjacency sorted ascending (mapped is sorted by (citing,
    // cited), which gives ascending reference lists directly).
    g.ref_off_.assign(static_cast<std::size_t>(n) + 1, 0);
    g.cit_off_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (auto [citing, cited] : mapped) {
        ++g.ref_off_[citing + 1];
        ++g.cit_off_[cited + 1];
    }
    for (int i = 0; i < n; ++i) {
        g.ref_off_[i + 1] += g.ref_off_[i];
        g.cit_off_[i + 1] += g.cit_off_[i];
    }
    g.ref_tgt_.resize(mapped.size());
    g.cit_src_.resize(mapped.size());
    std::vector<std::size_t> cursor(g.cit_off_.begin(), g.cit_off_.end() - 1);
    std::size_t ref_pos = 0;
    for (auto [citing, cited] : mapped) {
        g.ref_tgt_[ref_pos++] = cited;
        g.cit_src_[cursor[cited]++] = citing;
    }
    return g;
}

std::optional<int> CitationGraph::index_of(const std::string& external_id) const {
    auto it = index_.find(external_id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

GraphView::GraphView(const CitationGraph& g, int n) : g_(&g), n_(n) {
    if (n < 0 || n > g.paper_count())
        throw DimensionMismatch("view size " + std::to_string(n) + " out of range");
}

std::span<const int> GraphView::clamp(std::span<const int> full) const {
    // Ascending list: the in-view part is the prefix of entries < n.
    auto end = std::lower_bound(full.begin(), full.end(), n_);
    return full.subspan(0, static_cast<std::size_t>(end - full.begin()));
}

std::size_t GraphView::edge_count() const {
    std::size_t total = 0;
    for (int j = 0; j < n_; ++j) total += references(j).size();
    return total;
}

CitationGraph load_graph(std::istream& edge_source, std::istream& meta_source) {
    std::vector<CitationGraph::MetaRecord> meta;
    std::string line;
    std::size_t line_no = 0;
    bool any_date = false, any_year = false;
    while (std::getline(meta_source, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line, '\t');
        if (fields.size() < 2 || fields.size() > 3 || fields[0].empty())
            throw MalformedRecord("metadata line " + std::to_string(line_no) + ": '" + line + "'");
        CitationGraph::MetaRecord rec;
        rec.id = std::string(fields[0]);
        bool is_date = false;
        if (!parse_pub_time(fields[1], rec.pub_time, is_date))
            throw MalformedRecord("metadata line " + std::to_string(line_no) +
                                  ": bad publication time '" + std::string(fields[1]) + "'");
        (is_date ? any_date : any_year) = true;
        if (fields.size() == 3 && !fields[2].empty()) {
            for (auto a : split(fields[2], ';'))
                if (!a.empty()) rec.authors.emplace_back(a);
        }
        meta.push_back(std::move(rec));
    }
    if (any_date && any_year)
        throw MalformedRecord("metadata mixes year and date granularity");

    std::vector<CitationGraph::EdgeRecord> edges;
    line_no = 0;
    while (std::getline(edge_source, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line, '\t');
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
            throw MalformedRecord("edge line " + std::to_string(line_no) + ": '" + line + "'");
        edges.push_back({std::string(fields[0]), std::string(fields[1])});
    }
    return CitationGraph::from_records(std::move(meta), edges);
}

CitationGraph load_graph_files(const std::string& edge_path, const std::string& meta_path) {
    std::ifstream edges(edge_path);
    if (!edges) throw MalformedRecord("cannot open edge file '" + edge_path + "'");
    std::ifstream meta(meta_path);
    if (!meta) throw MalformedRecord("cannot open metadata file '" + meta_path + "'");
    return load_graph(edges, meta);
}

SplitView temporal_split(const CitationGraph& g, double test_ratio) {
    if (!(test_ratio >= 1.0 && test_ratio <= 2.0))
        throw RatioOutOfRange("test ratio " + std::to_string(test_ratio) + " not in [1, 2]");
    if (g.paper_count() < 2) throw EmptyGraph("temporal split needs at least 2 papers");

    const int n_current = g.paper_count() / 2;
    // Slack keeps ratio * n at its exact integer when the product lands
    // a few ulps below it.
    const int n_future = std::min(
        g.paper_count(), static_cast<int>(test_ratio * static_cast<double>(n_current) + 1e-9));

    SplitView split{GraphView(g, n_current), GraphView(g, n_future), test_ratio, {}};
    split.sti.assign(static_cast<std::size_t>(n_current), 0.0);
    for (int i = 0; i < n_current; ++i) {
        auto cits = split.future.citations(i);
        // Citing index in [n_current, n_future): binary search the
        // ascending source list.
        auto first = std::lower_bound(cits.begin(), cits.end(), n_current);
        split.sti[static_cast<std::size_t>(i)] = static_cast<double>(cits.end() - first);
    }
    return split;
}

std::vector<double> citation_age_distribution(const GraphView& g, int max_age) {
    std::vector<double> buckets(static_cast<std::size_t>(max_age) + 1, 0.0);
    double total = 0.0;
    bool any_edge = false;
    for (int j = 0; j < g.size(); ++j) {
        for (int i : g.references(j)) {
            any_edge = true;
            int age = g.pub_year(j) - g.pub_year(i);
            if (age < 0 || age > max_age) continue;
            buckets[static_cast<std::size_t>(age)] += 1.0;
            total += 1.0;
        }
    }
    if (!any_edge) throw EmptyGraph("citation age distribution of a graph with no citations");
    if (!(total > 0.0))
        throw EmptyGraph("no citations within max_age " + std::to_string(max_age));
    for (double& b : buckets) b /= total;
    return buckets;
}

}  // namespace impactrank
