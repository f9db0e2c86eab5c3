#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return IMPACTRANK_CLI_PATH; }

struct TempCorpus {
    fs::path dir;

    TempCorpus() {
        dir = fs::temp_directory_path() / ("impactrank_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        // 10 papers over 10 years; enough structure for every method.
        std::ofstream meta(dir / "meta.tsv");
        for (int i = 1; i <= 10; ++i)
            meta << 'q' << i / 10 << i % 10 << '\t' << 1999 + i << "\ta" << (i % 3) << ";a"
                 << (i % 5) << '\n';
        std::ofstream edges(dir / "edges.tsv");
        for (int i = 2; i <= 10; ++i)
            for (int j = 1; j < i; j += (i % 2) + 1)
                edges << 'q' << i / 10 << i % 10 << '\t' << 'q' << j / 10 << j % 10 << '\n';
    }
    ~TempCorpus() { fs::remove_all(dir); }

    std::string meta() const { return (dir / "meta.tsv").string(); }
    std::string edges() const { return (dir / "edges.tsv").string(); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
    std::string cmd = std::string(cli_path()) + " " + args + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("rank attrank writes one scored row per paper") {
    TempCorpus corpus;
    std::string out = corpus.path("scores.csv");
    int rc = run("rank attrank --edges " + corpus.edges() + " --meta " + corpus.meta() +
                 " --alpha 0.3 --beta 0.4 --gamma 0.3 --y 2 --eta -0.48 -o " + out);
    REQUIRE(rc == 0);
    std::string csv = slurp(out);
    CHECK(count_lines(csv) == 11);  // header + 10 papers
    CHECK(csv.rfind("paper_id,score", 0) == 0);
}

TEST_CASE("every baseline rank subcommand produces a full score file") {
    TempCorpus corpus;
    const std::string common = " --edges " + corpus.edges() + " --meta " + corpus.meta();
    for (const char* args :
         {"rank pagerank --alpha 0.5", "rank citerank --alpha 0.3 --tau-dir 2",
          "rank ram --gamma 0.5", "rank ecm --alpha 0.1 --gamma 0.3",
          "rank futurerank --alpha 0.4 --beta 0.1 --gamma 0.5 --rho -0.62"}) {
        std::string out = corpus.path("scores.csv");
        REQUIRE(run(args + common + " -o " + out) == 0);
        CHECK(count_lines(slurp(out)) == 11);
    }
}

TEST_CASE("gamma is inferred from alpha and beta when omitted") {
    TempCorpus corpus;
    std::string out = corpus.path("scores.csv");
    int rc = run("rank attrank --edges " + corpus.edges() + " --meta " + corpus.meta() +
                 " --alpha 0.3 --beta 0.4 --y 2 -o " + out);
    CHECK(rc == 0);
    CHECK(count_lines(slurp(out)) == 11);
}

TEST_CASE("alpha+beta over 1 is a config error (exit 2)") {
    TempCorpus corpus;
    int rc = run("rank attrank --edges " + corpus.edges() + " --meta " + corpus.meta() +
                 " --alpha 0.6 --beta 0.6 -o " + corpus.path("x.csv"));
    CHECK(rc == 2);
}

TEST_CASE("missing input files are config errors (exit 2)") {
    TempCorpus corpus;
    int rc = run("rank pagerank --edges /nonexistent.tsv --meta " + corpus.meta() + " -o " +
                 corpus.path("x.csv"));
    CHECK(rc == 2);
}

TEST_CASE("method failures are runtime errors (exit 3)") {
    TempCorpus corpus;
    // FutureRank with beta > 0 on a corpus without that author: strip
    // authors by rewriting the metadata without the third column.
    std::ofstream meta(corpus.path("noauthors.tsv"));
    for (int i = 1; i <= 10; ++i) meta << 'q' << i / 10 << i % 10 << '\t' << 1999 + i << '\n';
    meta.close();
    int rc = run("rank futurerank --edges " + corpus.edges() + " --meta " +
                 corpus.path("noauthors.tsv") + " --alpha 0.4 --beta 0.1 --gamma 0.5 -o " +
                 corpus.path("x.csv"));
    CHECK(rc == 3);
}

TEST_CASE("split writes the manifest and sti csv") {
    TempCorpus corpus;
    std::string outdir = corpus.path("splitdir");
    int rc = run("split --edges " + corpus.edges() + " --meta " + corpus.meta() +
                 " --test-ratio 1.6 --output-dir " + outdir);
    REQUIRE(rc == 0);
    nlohmann::json manifest = nlohmann::json::parse(slurp(outdir + "/manifest.json"));
    CHECK(manifest["n_current"] == 5);
    CHECK(manifest["n_future"] == 8);
    std::string sti = slurp(outdir + "/sti.csv");
    CHECK(count_lines(sti) == 6);  // header + 5 current papers
}

TEST_CASE("eval emits the report schema") {
    TempCorpus corpus;
    std::string out = corpus.path("report.json");
    int rc = run("eval --method ram --ram-gamma 0.5 --k 50 --edges " + corpus.edges() +
                 " --meta " + corpus.meta() + " --test-ratio 2.0 -o " + out);
    REQUIRE(rc == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j["method"] == "ram");
    CHECK(j["params"]["gamma"] == 0.5);
    CHECK(j.contains("spearman"));
    CHECK(j["ndcg"].contains("50"));
}

TEST_CASE("fit-eta recovers the decay of a synthetic exponential corpus") {
    // Citation ages distributed as e^(-0.5 * age): 1000 papers in year
    // 2010 citing cohorts of sizes proportional to the density.
    fs::path dir = fs::temp_directory_path() / "impactrank_fit_eta_test";
    fs::create_directories(dir);
    std::ofstream meta(dir / "meta.tsv");
    std::ofstream edges(dir / "edges.tsv");
    int next_id = 0;
    auto id = [](int k) { return "n" + std::to_string(k); };
    // one citing paper per age bucket with weight e^{-age/2} scaled to
    // integer counts 'citations to distinct old papers'
    for (int age = 0; age <= 10; ++age) {
        int count = static_cast<int>(std::lround(1000.0 * std::exp(-0.5 * age)));
        for (int c = 0; c < count; ++c) {
            int old_paper = next_id++;
            int new_paper = next_id++;
            meta << id(old_paper) << '\t' << 2010 - age << '\n'
                 << id(new_paper) << '\t' << 2010 << '\n';
            edges << id(new_paper) << '\t' << id(old_paper) << '\n';
        }
    }
    meta.close();
    edges.close();

    std::string cmd = std::string(cli_path()) + " fit-eta --edges " + (dir / "edges.tsv").string() +
                      " --meta " + (dir / "meta.tsv").string() +
                      " --max-age 10 --tail-start 0 > " + (dir / "eta.txt").string() +
                      " 2>/dev/null";
    int status = std::system(cmd.c_str());
    REQUIRE(WEXITSTATUS(status) == 0);
    double eta = std::stod(slurp((dir / "eta.txt").string()));
    CHECK(eta == doctest::Approx(-0.5).epsilon(0.02));
    fs::remove_all(dir);
}

TEST_CASE("attrank accepts a key = value config file") {
    TempCorpus corpus;
    std::ofstream cfg(corpus.path("run.conf"));
    cfg << "alpha = 0.2\nbeta = 0.5\ngamma = 0.3\ny = 2\neta = -0.4\n"
        << "attention_mode = count_fraction\nmax_iter = 150\n";
    cfg.close();
    std::string out = corpus.path("scores.csv");
    int rc = run("rank attrank --edges " + corpus.edges() + " --meta " + corpus.meta() +
                 " --config " + corpus.path("run.conf") + " -o " + out);
    REQUIRE(rc == 0);
    CHECK(count_lines(slurp(out)) == 11);
}

TEST_CASE("sweep emits a deterministic csv across job counts") {
    TempCorpus corpus;
    std::string out1 = corpus.path("sweep1.csv");
    std::string out2 = corpus.path("sweep2.csv");
    std::string base = "sweep --method ecm --metric spearman --test-ratio 2.0 --edges " +
                       corpus.edges() + " --meta " + corpus.meta();
    REQUIRE(run(base + " --jobs 1 -o " + out1) == 0);
    REQUIRE(run(base + " --jobs 3 -o " + out2) == 0);
    std::string csv1 = slurp(out1);
    CHECK(csv1 == slurp(out2));
    CHECK(count_lines(csv1) == 26);  // header + 25 ECM cells
    CHECK(csv1.rfind("alpha,gamma,metric,value,error", 0) == 0);
}

TEST_CASE("help lists every subcommand") {
    std::string path = fs::temp_directory_path() / "impactrank_help.txt";
    std::string cmd = std::string(cli_path()) + " --help > " + path + " 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::string help = slurp(path);
    for (const char* sub : {"rank", "split", "eval", "sweep", "fit-eta"})
        CHECK(help.find(sub) != std::string::npos);
    fs::remove(path);
}
