#include "impactrank/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "impactrank/attrank.hpp"

namespace impactrank {

BaselineMethod baseline_method_from_string(const std::string& s) {
    if (s == "citerank" || s == "cr") return BaselineMethod::CR;
    if (s == "futurerank" || s == "fr") return BaselineMethod::FR;
    if (s == "ram") return BaselineMethod::RAM;
    if (s == "ecm") return BaselineMethod::ECM;
    throw InvalidParams("unknown baseline method '" + s + "'");
}

const char* to_string(BaselineMethod m) {
    switch (m) {
        case BaselineMethod::CR: return "citerank";
        case BaselineMethod::FR: return "futurerank";
        case BaselineMethod::RAM: return "ram";
        case BaselineMethod::ECM: return "ecm";
    }
    return "?";
}

void BaselineParams::validate() const {
    auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
    switch (method) {
        case BaselineMethod::CR:
            if (!open_unit(cr_alpha)) throw InvalidParams("citerank alpha must be in (0, 1)");
            if (!(cr_tau_dir > 0.0)) throw InvalidParams("citerank tau_dir must be > 0");
            break;
        case BaselineMethod::FR: {
            auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
            if (!unit(fr_alpha) || !unit(fr_beta) || !unit(fr_gamma))
                throw InvalidParams("futurerank alpha, beta, gamma must lie in [0, 1]");
            if (fr_alpha + fr_beta + fr_gamma > 1.0 + 1e-12)
                throw InvalidParams("futurerank alpha + beta + gamma must be <= 1");
            if (!(fr_rho < 0.0)) throw InvalidParams("futurerank rho must be < 0");
            break;
        }
        case BaselineMethod::RAM:
            if (!open_unit(ram_gamma)) throw InvalidParams("ram gamma must be in (0, 1)");
            break;
        case BaselineMethod::ECM:
            if (!open_unit(ecm_alpha)) throw InvalidParams("ecm alpha must be in (0, 1)");
            if (!open_unit(ecm_gamma)) throw InvalidParams("ecm gamma must be in (0, 1)");
            break;
    }
}

PowerIterationResult citerank(const GraphView& g, double alpha, double tau_dir, double tol,
                              int max_iter) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidParams("citerank alpha must be in [0, 1)");
    if (!(tau_dir > 0.0)) throw InvalidParams("citerank tau_dir must be > 0");
    if (g.size() < 1) throw EmptyGraph("citerank on an empty view");

    const int n = g.size();
    const int newest = g.newest_year();
    std::vector<double> rho(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        rho[static_cast<std::size_t>(i)] =
            std::exp(-static_cast<double>(newest - g.pub_year(i)) / tau_dir);
    TeleportVector start = TeleportVector::from_weights(std::move(rho));

    TransitionView S(g);
    PowerIterationResult result;
    std::vector<double> traffic = start.values;
    ScoreVector term{start.values, false};
    for (int k = 1; k <= max_iter; ++k) {
        term = matvec(S, term);
        for (double& v : term.values) v *= alpha;
        double increment = std::accumulate(term.values.begin(), term.values.end(), 0.0);
        result.residuals.push_back(increment);
        result.iterations = k;
        if (increment < tol) {
            result.scores = ScoreVector{std::move(traffic), false};
            result.scores.normalize();
            return result;
        }
        for (std::size_t i = 0; i < traffic.size(); ++i) traffic[i] += term.values[i];
    }
    char msg[96];
    std::snprintf(msg, sizeof(msg), "citerank series not below tol after %d terms, increment %.3g",
                  max_iter, result.residuals.back());
    const double last = result.residuals.back();
    throw NoConvergence(msg, last, max_iter, std::move(result.residuals));
}

PowerIterationResult futurerank(const GraphView& g, const FutureRankParams& params, double tol,
                                int max_iter) {
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!unit(params.alpha) || !unit(params.beta) || !unit(params.gamma) ||
        params.alpha + params.beta + params.gamma > 1.0 + 1e-12)
        throw InvalidParams("futurerank coefficients must lie in [0,1] and sum to <= 1");
    if (!(params.rho <= 0.0)) throw InvalidParams("futurerank rho must be <= 0");
    if (g.size() < 1) throw EmptyGraph("futurerank on an empty view");
    if (params.beta > 0.0 && !g.graph().has_authors())
        throw MissingAuthors("futurerank with beta > 0 needs author metadata");

    const int n = g.size();
    const double uniform_coeff = 1.0 - params.alpha - params.beta - params.gamma;
    TransitionView S(g);
    TeleportVector recency = recency_vector(g, params.rho);

    const int n_authors = g.graph().has_authors() ? g.graph().author_count() : 0;
    std::vector<double> author_score(static_cast<std::size_t>(n_authors));

    PowerIterationResult result;
    std::vector<double> papers(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    std::vector<double> next(papers.size());
    std::vector<double> contrib(papers.size());
    for (int iter = 1; iter <= max_iter; ++iter) {
        if (params.beta > 0.0) {
            std::fill(author_score.begin(), author_score.end(), 0.0);
            for (int p = 0; p < n; ++p)
                for (int a : g.authors_of(p))
                    author_score[static_cast<std::size_t>(a)] += papers[static_cast<std::size_t>(p)];
            double author_total =
                std::accumulate(author_score.begin(), author_score.end(), 0.0);
            if (author_total > 0.0)
                for (double& s : author_score) s /= author_total;
            // Papers without authors keep zero contribution.
            std::fill(contrib.begin(), contrib.end(), 0.0);
            for (int p = 0; p < n; ++p)
                for (int a : g.authors_of(p))
                    contrib[static_cast<std::size_t>(p)] += author_score[static_cast<std::size_t>(a)];
            double contrib_total = std::accumulate(contrib.begin(), contrib.end(), 0.0);
            if (contrib_total > 0.0)
                for (double& c : contrib) c /= contrib_total;
        }

        ScoreVector walked = matvec(S, ScoreVector{papers, false});
        for (int i = 0; i < n; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            next[ii] = params.alpha * walked.values[ii] +
                       params.gamma * recency.values[ii] +
                       uniform_coeff / static_cast<double>(n);
            if (params.beta > 0.0) next[ii] += params.beta * contrib[ii];
        }
        double total = std::accumulate(next.begin(), next.end(), 0.0);
        for (double& v : next) v /= total;

        double residual = 0.0;
        for (std::size_t i = 0; i < papers.size(); ++i) residual += std::abs(next[i] - papers[i]);
        result.residuals.push_back(residual);
        papers.swap(next);
        result.iterations = iter;
        if (residual < tol) {
            result.scores = ScoreVector{std::move(papers), true};
            return result;
        }
    }
    char msg[96];
    std::snprintf(msg, sizeof(msg), "futurerank did not converge in %d iterations, residual %.3g",
                  max_iter, result.residuals.back());
    const double last = result.residuals.back();
    throw NoConvergence(msg, last, max_iter, std::move(result.residuals));
}

namespace {

// One pass of the age-weighted adjacency: (R x)_i = sum over citations
// (j -> i) of gamma^(newest - year_j) * x_j. Shared by RAM and ECM so
// ECM at alpha = 0 reproduces RAM bit for bit.
std::vector<double> retained_adjacency_pass(const GraphView& g,
                                            std::span<const double> citation_weight,
                                            std::span<const double> x) {
    std::vector<double> y(static_cast<std::size_t>(g.size()), 0.0);
    for (int i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (int j : g.citations(i))
            acc += citation_weight[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

std::vector<double> citation_weights(const GraphView& g, double gamma) {
    const int newest = g.newest_year();
    std::vector<double> w(static_cast<std::size_t>(g.size()));
    for (int j = 0; j < g.size(); ++j)
        w[static_cast<std::size_t>(j)] = std::pow(gamma, static_cast<double>(newest - g.pub_year(j)));
    return w;
}

}  // namespace

ScoreVector ram(const GraphView& g, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidParams("ram gamma must be in (0, 1]");
    if (g.size() < 1) throw EmptyGraph("ram on an empty view");
    std::vector<double> weights = citation_weights(g, gamma);
    std::vector<double> ones(static_cast<std::size_t>(g.size()), 1.0);
    ScoreVector scores{retained_adjacency_pass(g, weights, ones), false};
    scores.normalize();
    return scores;
}

PowerIterationResult ecm(const GraphView& g, double alpha, double gamma, double tol, int max_k) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidParams("ecm alpha must be in [0, 1]");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidParams("ecm gamma must be in (0, 1]");
    if (g.size() < 1) throw EmptyGraph("ecm on an empty view");
    if (max_k < 1) throw InvalidParams("ecm max_k must be >= 1");

    std::vector<double> weights = citation_weights(g, gamma);
    std::vector<double> term(static_cast<std::size_t>(g.size()), 1.0);
    term = retained_adjacency_pass(g, weights, term);  // k = 1 chains
    std::vector<double> scores = term;

    PowerIterationResult result;
    result.residuals.push_back(std::accumulate(term.begin(), term.end(), 0.0));
    result.iterations = 1;
    for (int k = 2; k <= max_k; ++k) {
        term = retained_adjacency_pass(g, weights, term);
        for (double& v : term) v *= alpha;
        double increment = std::accumulate(term.begin(), term.end(), 0.0);
        result.residuals.push_back(increment);
        result.iterations = k;
        if (increment < tol) {
            result.scores = ScoreVector{std::move(scores), false};
            result.scores.normalize();
            return result;
        }
        for (std::size_t i = 0; i < scores.size(); ++i) scores[i] += term[i];
    }
    if (result.residuals.size() >= 2 &&
        result.residuals.back() >= result.residuals[result.residuals.size() - 2]) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "ecm chain weights not shrinking after %d terms (%.3g)",
                      max_k, result.residuals.back());
        const double last = result.residuals.back();
        throw NoConvergence(msg, last, max_k, std::move(result.residuals));
    }
    result.scores = ScoreVector{std::move(scores), false};
    result.scores.normalize();
    return result;
}

}  // namespace impactrank
