#include "impactrank/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

namespace impactrank {

std::string MethodSpec::name() const {
    switch (kind) {
        case Kind::PageRank: return "pagerank";
        case Kind::AttRank: return "attrank";
        case Kind::CiteRank: return "citerank";
        case Kind::FutureRank: return "futurerank";
        case Kind::Ram: return "ram";
        case Kind::Ecm: return "ecm";
    }
    return "?";
}

std::map<std::string, double> MethodSpec::param_map() const {
    switch (kind) {
        case Kind::PageRank:
            return {{"alpha", pagerank_alpha}};
        case Kind::AttRank:
            return {{"alpha", attrank.alpha},
                    {"beta", attrank.beta},
                    {"gamma", attrank.gamma},
                    {"eta", attrank.eta},
                    {"y", static_cast<double>(attrank.y)}};
        case Kind::CiteRank:
            return {{"alpha", baseline.cr_alpha}, {"tau_dir", baseline.cr_tau_dir}};
        case Kind::FutureRank:
            return {{"alpha", baseline.fr_alpha},
                    {"beta", baseline.fr_beta},
                    {"gamma", baseline.fr_gamma},
                    {"rho", baseline.fr_rho}};
        case Kind::Ram:
            return {{"gamma", baseline.ram_gamma}};
        case Kind::Ecm:
            return {{"alpha", baseline.ecm_alpha}, {"gamma", baseline.ecm_gamma}};
    }
    return {};
}

RankOutcome run_method(const MethodSpec& spec, const GraphView& current) {
    switch (spec.kind) {
        case MethodSpec::Kind::PageRank: {
            TransitionView S(current);
            PowerIterationResult r = pagerank(S, TeleportVector::uniform(current.size()),
                                              spec.pagerank_alpha, spec.tol, spec.max_iter);
            return {std::move(r.scores), r.iterations, std::move(r.residuals)};
        }
        case MethodSpec::Kind::AttRank: {
            PowerIterationResult r = attrank_solve(current, spec.attrank, spec.tol, spec.max_iter);
            return {std::move(r.scores), r.iterations, std::move(r.residuals)};
        }
        case MethodSpec::Kind::CiteRank: {
            PowerIterationResult r = citerank(current, spec.baseline.cr_alpha,
                                              spec.baseline.cr_tau_dir, spec.tol, spec.max_iter);
            return {std::move(r.scores), r.iterations, std::move(r.residuals)};
        }
        case MethodSpec::Kind::FutureRank: {
            FutureRankParams p{spec.baseline.fr_alpha, spec.baseline.fr_beta,
                               spec.baseline.fr_gamma, spec.baseline.fr_rho};
            PowerIterationResult r = futurerank(current, p, spec.tol, spec.max_iter);
            return {std::move(r.scores), r.iterations, std::move(r.residuals)};
        }
        case MethodSpec::Kind::Ram:
            return {ram(current, spec.baseline.ram_gamma), 1, {}};
        case MethodSpec::Kind::Ecm: {
            PowerIterationResult r = ecm(current, spec.baseline.ecm_alpha,
                                         spec.baseline.ecm_gamma, spec.tol, spec.max_iter);
            return {std::move(r.scores), r.iterations, std::move(r.residuals)};
        }
    }
    throw InvalidParams("unknown method kind");
}

EvalReport evaluate(const std::string& name, const MethodFn& method, const SplitView& split,
                    std::span<const int> ks, bool exclude_zero_truth) {
    const auto start = std::chrono::steady_clock::now();
    RankOutcome outcome = method(split.current);
    const auto stop = std::chrono::steady_clock::now();
    if (static_cast<int>(outcome.scores.values.size()) != split.current.size())
        throw DimensionMismatch("method scored " + std::to_string(outcome.scores.values.size()) +
                                " papers, current view has " +
                                std::to_string(split.current.size()));

    EvalReport report;
    report.method = name;
    report.exclude_zero_truth = exclude_zero_truth;
    report.iterations = outcome.iterations;
    report.runtime_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    report.spearman = spearman_rho(outcome.scores.values, split.sti, exclude_zero_truth);
    std::vector<int> ranking = ranking_from_scores(outcome.scores.values);
    for (int k : ks) report.ndcg[k] = ndcg_at_k(ranking, split.sti, k);
    report.n_evaluated = exclude_zero_truth
                             ? static_cast<int>(std::count_if(split.sti.begin(), split.sti.end(),
                                                              [](double v) { return v != 0.0; }))
                             : split.current.size();
    return report;
}

EvalReport evaluate(const MethodSpec& spec, const SplitView& split, std::span<const int> ks,
                    bool exclude_zero_truth) {
    EvalReport report =
        evaluate(spec.name(), [&](const GraphView& view) { return run_method(spec, view); },
                 split, ks, exclude_zero_truth);
    report.params = spec.param_map();
    return report;
}

int ParamRange::count() const {
    if (step <= 0.0 || min > max) throw InvalidParams("bad range for parameter " + name);
    return static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
}

double ParamRange::value(int index) const { return min + step * static_cast<double>(index); }

std::vector<std::vector<double>> SweepGrid::cells() const {
    std::vector<std::vector<double>> out;
    std::vector<int> idx(ranges.size(), 0);
    std::vector<double> cell(ranges.size());
    while (true) {
        for (std::size_t d = 0; d < ranges.size(); ++d) cell[d] = ranges[d].value(idx[d]);
        if (!constraint || constraint(cell)) out.push_back(cell);
        // Odometer increment, last range fastest.
        std::size_t d = ranges.size();
        while (d > 0) {
            --d;
            if (++idx[d] < ranges[d].count()) break;
            idx[d] = 0;
            if (d == 0) return out;
        }
        if (ranges.empty()) return out;
    }
}

MethodSpec SweepGrid::make_spec(std::span<const double> cell) const {
    MethodSpec spec;
    spec.tol = tol;
    spec.max_iter = max_iter;
    if (method == "attrank") {
        spec.kind = MethodSpec::Kind::AttRank;
        spec.attrank.alpha = cell[0];
        spec.attrank.beta = cell[1];
        spec.attrank.gamma = cell[2];
        spec.attrank.y = static_cast<int>(std::lround(cell[3]));
        spec.attrank.eta = eta;
        spec.attrank.attention_mode = attention_mode;
    } else if (method == "citerank") {
        spec.kind = MethodSpec::Kind::CiteRank;
        spec.baseline.method = BaselineMethod::CR;
        spec.baseline.cr_alpha = cell[0];
        spec.baseline.cr_tau_dir = cell[1];
    } else if (method == "futurerank") {
        spec.kind = MethodSpec::Kind::FutureRank;
        spec.baseline.method = BaselineMethod::FR;
        spec.baseline.fr_alpha = cell[0];
        spec.baseline.fr_beta = cell[1];
        spec.baseline.fr_gamma = cell[2];
        spec.baseline.fr_rho = cell[3];
    } else if (method == "ram") {
        spec.kind = MethodSpec::Kind::Ram;
        spec.baseline.method = BaselineMethod::RAM;
        spec.baseline.ram_gamma = cell[0];
    } else if (method == "ecm") {
        spec.kind = MethodSpec::Kind::Ecm;
        spec.baseline.method = BaselineMethod::ECM;
        spec.baseline.ecm_alpha = cell[0];
        spec.baseline.ecm_gamma = cell[1];
    } else {
        throw InvalidParams("no sweep grid for method '" + method + "'");
    }
    return spec;
}

SweepGrid attrank_grid(double eta, AttentionMode mode) {
    SweepGrid grid;
    grid.method = "attrank";
    grid.ranges = {{"alpha", 0.0, 0.5, 0.1},
                   {"beta", 0.0, 1.0, 0.1},
                   {"gamma", 0.0, 0.9, 0.1},
                   {"y", 1.0, 5.0, 1.0}};
    grid.constraint = [](std::span<const double> c) {
        return std::abs(c[0] + c[1] + c[2] - 1.0) < 1e-9;
    };
    grid.eta = eta;
    grid.attention_mode = mode;
    return grid;
}

SweepGrid baseline_grid(BaselineMethod method) {
    SweepGrid grid;
    grid.method = to_string(method);
    switch (method) {
        case BaselineMethod::CR:
            grid.ranges = {{"alpha", 0.1, 0.7, 0.2}, {"tau_dir", 2.0, 10.0, 2.0}};
            break;
        case BaselineMethod::FR:
            grid.ranges = {{"alpha", 0.1, 0.5, 0.1},
                           {"beta", 0.0, 0.9, 0.1},
                           {"gamma", 0.0, 0.9, 0.1},
                           {"rho", -0.82, -0.42, 0.2}};
            grid.constraint = [](std::span<const double> c) {
                return std::abs(c[0] + c[1] + c[2] - 1.0) < 1e-9;
            };
            break;
        case BaselineMethod::RAM:
            grid.ranges = {{"gamma", 0.1, 0.9, 0.1}};
            break;
        case BaselineMethod::ECM:
            grid.ranges = {{"alpha", 0.1, 0.5, 0.1}, {"gamma", 0.1, 0.5, 0.1}};
            break;
    }
    return grid;
}

SweepResult sweep(const SweepGrid& grid, const SplitView& split, const std::string& metric,
                  int k, bool exclude_zero_truth, int jobs) {
    if (metric != "spearman" && metric != "ndcg")
        throw InvalidParams("sweep metric must be 'spearman' or 'ndcg'");
    const std::vector<std::vector<double>> cells = grid.cells();
    if (cells.empty()) throw InvalidParams("sweep grid is empty after constraints");

    SweepResult result;
    for (const ParamRange& r : grid.ranges) result.columns.push_back(r.name);
    result.metric_label = metric == "ndcg" ? "ndcg@" + std::to_string(k) : metric;
    result.rows.resize(cells.size());

    const int ks[1] = {k};
    auto run_cell = [&](std::size_t c) {
        SweepRow& row = result.rows[c];
        row.params = cells[c];
        try {
            MethodSpec spec = grid.make_spec(cells[c]);
            EvalReport report = evaluate(spec, split, ks, exclude_zero_truth);
            row.value = metric == "spearman" ? report.spearman : report.ndcg.at(k);
        } catch (const Error& e) {
            row.value = std::numeric_limits<double>::quiet_NaN();
            row.error = e.kind();
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1 || cells.size() == 1) {
        for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t c = next.fetch_add(1); c < cells.size(); c = next.fetch_add(1))
                run_cell(c);
        };
        std::vector<std::thread> pool;
        const int n_threads = std::min<int>(jobs, static_cast<int>(cells.size()));
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t c = 0; c < result.rows.size(); ++c) {
        const SweepRow& row = result.rows[c];
        if (row.error.empty() &&
            (result.best_index < 0 ||
             row.value > result.rows[static_cast<std::size_t>(result.best_index)].value))
            result.best_index = static_cast<int>(c);
    }
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    for (const std::string& c : result.columns) out << c << ',';
    out << "metric,value,error\n";
    char buf[40];
    for (const SweepRow& row : result.rows) {
        for (double p : row.params) {
            std::snprintf(buf, sizeof(buf), "%.17g", p);
            out << buf << ',';
        }
        out << result.metric_label << ',';
        if (std::isnan(row.value))
            out << "nan";
        else {
            std::snprintf(buf, sizeof(buf), "%.17g", row.value);
            out << buf;
        }
        out << ',' << row.error << '\n';
    }
}

ConvergenceReport convergence_report(const MethodSpec& spec, const SplitView& split) {
    if (spec.kind == MethodSpec::Kind::Ram)
        throw InvalidParams("ram is not an iterative method");
    RankOutcome outcome = run_method(spec, split.current);
    return {outcome.iterations, std::move(outcome.residuals)};
}

}  // namespace impactrank
