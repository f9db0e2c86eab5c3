#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "impactrank/harness.hpp"

using namespace impactrank;
using testutil::make_graph;
using testutil::toy_graph;


TEST_CASE("evaluate with the identity oracle scores perfectly") {
    std::mt19937 rng(101);
    auto fx = testutil::random_split(rng);
    SplitView& split = fx.split;
    const int ks[] = {5, 10, 50};
    EvalReport report = evaluate(
        "identity",
        [&](const GraphView&) {
            return RankOutcome{ScoreVector{split.sti, false}, 1, {}};
        },
        split, ks, true);
    CHECK(report.spearman == 1.0);
    for (auto [k, v] : report.ndcg) CHECK(v == 1.0);
    CHECK(report.method == "identity");
    CHECK(report.n_evaluated > 0);
}

TEST_CASE("evaluate with reversed STI scores -1") {
    std::mt19937 rng(103);
    auto fx = testutil::random_split(rng);
    SplitView& split = fx.split;
    const int ks[] = {10};
    EvalReport report = evaluate(
        "reversed",
        [&](const GraphView&) {
            std::vector<double> neg = split.sti;
            for (double& v : neg) v = -v;
            return RankOutcome{ScoreVector{std::move(neg), false}, 1, {}};
        },
        split, ks, true);
    CHECK(report.spearman == -1.0);
}

TEST_CASE("methods invoked by evaluate cannot see future edges") {
    // Current prefix of 3 papers has exactly 1 edge; 5 more edges
    // involve future papers and must stay invisible to the method.
    CitationGraph g = make_graph({2000, 2001, 2002, 2003, 2004, 2005},
                                 {{1, 0}, {3, 0}, {4, 0}, {4, 1}, {5, 3}, {5, 4}});
    SplitView split = temporal_split(g, 2.0);
    REQUIRE(split.current.size() == 3);
    std::size_t seen_edges = 0;
    int seen_papers = 0;
    const int ks[] = {5};
    evaluate(
        "probe",
        [&](const GraphView& view) {
            seen_papers = view.size();
            seen_edges = view.edge_count();
            std::vector<double> s(static_cast<std::size_t>(view.size()));
            for (int i = 0; i < view.size(); ++i) s[static_cast<std::size_t>(i)] = i + 1.0;
            return RankOutcome{ScoreVector{std::move(s), false}, 1, {}};
        },
        split, ks, true);
    CHECK(seen_papers == 3);
    CHECK(seen_edges == 1);  // only 1->0; everything else is future-only
}

TEST_CASE("evaluate runs the real methods end to end") {
    std::mt19937 rng(107);
    auto fx = testutil::random_split(rng);
    SplitView& split = fx.split;
    const int ks[] = {5, 50};
    MethodSpec spec;
    spec.kind = MethodSpec::Kind::Ram;
    spec.baseline.ram_gamma = 0.5;
    EvalReport report = evaluate(spec, split, ks, true);
    CHECK(report.method == "ram");
    CHECK(report.params.at("gamma") == 0.5);
    CHECK(report.spearman >= -1.0);
    CHECK(report.spearman <= 1.0);
    CHECK(report.ndcg.at(50) > 0.0);
}

TEST_CASE("attrank tuning grid has the closed-form cell count") {
    SweepGrid grid = attrank_grid(-0.3);
    // Count (alpha, beta, gamma, y) tuples on the 0.1 lattice with
    // alpha <= 0.5, beta <= 1, gamma <= 0.9 and alpha+beta+gamma = 1.
    int expected = 0;
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; b <= 10; ++b) {
            int c = 10 - a - b;
            if (c >= 0 && c <= 9) ++expected;
        }
    expected *= 5;  // y in 1..5
    CHECK(expected == 250);
    CHECK(grid.cells().size() == static_cast<std::size_t>(expected));
}

TEST_CASE("baseline grids enumerate the documented setting counts") {
    CHECK(baseline_grid(BaselineMethod::CR).cells().size() == 20);
    CHECK(baseline_grid(BaselineMethod::FR).cells().size() == 120);
    CHECK(baseline_grid(BaselineMethod::RAM).cells().size() == 9);
    CHECK(baseline_grid(BaselineMethod::ECM).cells().size() == 25);
}

TEST_CASE("single-cell sweep reports that cell as best") {
    std::mt19937 rng(109);
    auto fx = testutil::random_split(rng);
    SplitView& split = fx.split;
    SweepGrid grid;
    grid.method = "ram";
    grid.ranges = {{"gamma", 0.5, 0.5, 0.1}};
    SweepResult result = sweep(grid, split, "spearman", 50, true, 1);
    REQUIRE(result.rows.size() == 1);
    CHECK(result.best_index == 0);
    CHECK(result.rows[0].error.empty());
}

TEST_CASE("sweep output is deterministic across job counts") {
    std::mt19937 rng(113);
    auto fx = testutil::random_split(rng, 80);
    SplitView& split = fx.split;
    SweepGrid grid = baseline_grid(BaselineMethod::ECM);
    SweepResult serial = sweep(grid, split, "ndcg", 10, true, 1);
    SweepResult parallel = sweep(grid, split, "ndcg", 10, true, 4);
    std::ostringstream a, b;
    write_sweep_csv(a, serial);
    write_sweep_csv(b, parallel);
    CHECK(a.str() == b.str());
    CHECK(serial.best_index == parallel.best_index);
}

TEST_CASE("sweep argmax matches a brute-force scan of the table") {
    std::mt19937 rng(127);
    auto fx = testutil::random_split(rng, 70);
    SplitView& split = fx.split;
    SweepGrid grid = baseline_grid(BaselineMethod::RAM);
    SweepResult result = sweep(grid, split, "spearman", 50, true, 2);
    int brute = -1;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (!result.rows[i].error.empty()) continue;
        if (brute < 0 || result.rows[i].value > result.rows[static_cast<std::size_t>(brute)].value)
            brute = static_cast<int>(i);
    }
    CHECK(result.best_index == brute);
}

TEST_CASE("failed cells become NaN rows and never abort the sweep") {
    // Without author metadata every beta > 0 FutureRank cell fails;
    // the beta = 0 cells still run.
    std::mt19937 rng(131);
    auto fx = testutil::random_split(rng);
    SplitView& split = fx.split;
    SweepGrid grid = baseline_grid(BaselineMethod::FR);
    SweepResult result = sweep(grid, split, "spearman", 50, true, 2);
    REQUIRE(result.rows.size() == 120);
    int failed = 0, succeeded = 0;
    for (const SweepRow& row : result.rows) {
        if (row.params[1] > 0.0) {
            CHECK(std::isnan(row.value));
            CHECK(row.error == "MissingAuthors");
            ++failed;
        } else {
            CHECK(row.error.empty());
            ++succeeded;
        }
    }
    CHECK(failed > 0);
    CHECK(succeeded > 0);
    CHECK(result.best_index >= 0);
    std::ostringstream out;
    write_sweep_csv(out, result);
    CHECK(out.str().find("nan,MissingAuthors") != std::string::npos);
}

TEST_CASE("non-converged cells are recorded, converged cells still win") {
    std::mt19937 rng(157);
    auto fx = testutil::random_split(rng);
    SplitView& split = fx.split;
    SweepGrid grid;
    grid.method = "attrank";
    grid.ranges = {{"alpha", 0.0, 0.5, 0.5},
                   {"beta", 0.4, 0.4, 0.1},
                   {"gamma", 0.1, 0.6, 0.5},
                   {"y", 2.0, 2.0, 1.0}};
    grid.constraint = [](std::span<const double> c) {
        return std::abs(c[0] + c[1] + c[2] - 1.0) < 1e-9;
    };
    grid.eta = -0.3;
    grid.max_iter = 2;  // starves every cell that actually iterates
    SweepResult result = sweep(grid, split, "spearman", 50, true, 1);
    REQUIRE(result.rows.size() == 2);
    CHECK(result.rows[0].error.empty());  // alpha = 0 solves in one pass
    CHECK(result.rows[1].error == "NoConvergence");
    CHECK(std::isnan(result.rows[1].value));
    CHECK(result.best_index == 0);
}

TEST_CASE("sweep csv has the documented long format") {
    std::mt19937 rng(137);
    auto fx = testutil::random_split(rng);
    SplitView& split = fx.split;
    SweepGrid grid;
    grid.method = "attrank";
    grid.ranges = {{"alpha", 0.0, 0.0, 0.1},
                   {"beta", 0.4, 0.4, 0.1},
                   {"gamma", 0.6, 0.6, 0.1},
                   {"y", 1.0, 2.0, 1.0}};
    grid.eta = -0.3;
    SweepResult result = sweep(grid, split, "ndcg", 50, true, 1);
    std::ostringstream out;
    write_sweep_csv(out, result);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "alpha,beta,gamma,y,metric,value,error");
    std::string row;
    int rows = 0;
    while (std::getline(in, row)) {
        ++rows;
        CHECK(row.find("ndcg@50") != std::string::npos);
    }
    CHECK(rows == 2);
}

TEST_CASE("convergence report returns the monotone residual trace") {
    std::mt19937 rng(139);
    auto fx = testutil::random_split(rng);
    SplitView& split = fx.split;
    MethodSpec spec;
    spec.kind = MethodSpec::Kind::AttRank;
    spec.attrank.alpha = 0.5;
    spec.attrank.beta = 0.3;
    spec.attrank.gamma = 0.2;
    spec.attrank.eta = -0.3;
    spec.attrank.y = 2;
    ConvergenceReport report = convergence_report(spec, split);
    CHECK(report.iterations == static_cast<int>(report.residuals.size()));
    CHECK(report.residuals.back() < 1e-12);
    for (std::size_t i = 1; i < report.residuals.size(); ++i)
        CHECK(report.residuals[i] <= report.residuals[i - 1] + 1e-14);
}

TEST_CASE("alpha=0 attrank reports a single iteration") {
    std::mt19937 rng(149);
    auto fx = testutil::random_split(rng);
    SplitView& split = fx.split;
    MethodSpec spec;
    spec.kind = MethodSpec::Kind::AttRank;
    spec.attrank.alpha = 0.0;
    spec.attrank.beta = 0.4;
    spec.attrank.gamma = 0.6;
    spec.attrank.eta = -0.2;
    spec.attrank.y = 2;
    ConvergenceReport report = convergence_report(spec, split);
    CHECK(report.iterations == 1);
}

TEST_CASE("ram has no convergence report") {
    std::mt19937 rng(151);
    auto fx = testutil::random_split(rng);
    SplitView& split = fx.split;
    MethodSpec spec;
    spec.kind = MethodSpec::Kind::Ram;
    CHECK_THROWS_AS(convergence_report(spec, split), InvalidParams);
}
