#include "facegraph/graphmatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "facegraph/errors.hpp"

namespace facegraph {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log-domain support row update shared by relax_once and relax. `edge_sim`
// yields s^e for (gallery i, gallery p, probe j, probe q); summation order
// is ascending q, then ascending p.
template <typename EdgeSim>
ProbabilityMatrix relaxation_update(const ProbabilityMatrix& cur, size_t n, size_t m,
                                    double eps_support, EdgeSim&& edge_sim, bool* underflow) {
    ProbabilityMatrix next;
    next.rows = n;
    next.cols = m;
    next.p.assign(n * m, 0.0);
    if (underflow) *underflow = false;

    std::vector<double> lognum(m);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) {
            double pij = cur.at(i, j);
            double l = pij > 0.0 ? 2.0 * std::log(pij) : kNegInf;
            if (l != kNegInf) {
                for (size_t p = 0; p < n; ++p) {
                    if (p == i) continue;
                    double inner = 0.0;
                    for (size_t q = 0; q < m; ++q) inner += edge_sim(i, p, j, q) * cur.at(p, q);
                    l += std::log(std::max(inner, eps_support));
                }
            }
            lognum[j] = l;
        }
        double mx = *std::max_element(lognum.begin(), lognum.end());
        if (mx == kNegInf) {
            // every support in the row underflowed; reset to uniform
            if (underflow) *underflow = true;
            for (size_t j = 0; j < m; ++j) next.at(i, j) = 1.0 / static_cast<double>(m);
            continue;
        }
        double denom = 0.0;
        for (size_t j = 0; j < m; ++j) denom += std::exp(lognum[j] - mx);
        for (size_t j = 0; j < m; ++j) next.at(i, j) = std::exp(lognum[j] - mx) / denom;
    }
    return next;
}

double max_abs_delta(const ProbabilityMatrix& a, const ProbabilityMatrix& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.p.size(); ++i) d = std::max(d, std::abs(a.p[i] - b.p[i]));
    return d;
}

}  // namespace

AttributedGraph::AttributedGraph(std::vector<Keypoint> nodes) : nodes_(std::move(nodes)) {
    const size_t n = nodes_.size();
    dist_.assign(n * n, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t p = i + 1; p < n; ++p) {
            double dx = nodes_[i].x - nodes_[p].x;
            double dy = nodes_[i].y - nodes_[p].y;
            double d = std::sqrt(dx * dx + dy * dy);
            dist_[i * n + p] = d;
            dist_[p * n + i] = d;
        }
}

AttributedGraph build_graph(const std::vector<Keypoint>& group) {
    return AttributedGraph(group);
}

ProbabilityMatrix node_similarity_matrix(const AttributedGraph& g, const AttributedGraph& p) {
    if (g.node_count() == 0 || p.node_count() == 0)
        throw Error("node similarity requires nonempty graphs");
    ProbabilityMatrix s;
    s.rows = g.node_count();
    s.cols = p.node_count();
    s.p.resize(s.rows * s.cols);
    for (size_t i = 0; i < s.rows; ++i)
        for (size_t j = 0; j < s.cols; ++j)
            s.at(i, j) = descriptor_similarity(g.node(i), p.node(j));
    return s;
}

double edge_similarity(double d_gallery, double d_probe, double sigma_e) {
    if (sigma_e <= 0) throw Error("sigma_e must be positive");
    return std::exp(-std::abs(d_gallery - d_probe) / sigma_e);
}

ProbabilityMatrix make_priors(const ProbabilityMatrix& similarities) {
    ProbabilityMatrix priors = similarities;
    for (size_t i = 0; i < priors.rows; ++i) {
        double sum = 0.0;
        for (size_t j = 0; j < priors.cols; ++j) sum += priors.at(i, j);
        if (sum <= 0.0) {
            for (size_t j = 0; j < priors.cols; ++j)
                priors.at(i, j) = 1.0 / static_cast<double>(priors.cols);
        } else {
            for (size_t j = 0; j < priors.cols; ++j) priors.at(i, j) /= sum;
        }
    }
    return priors;
}

ProbabilityMatrix relax_once(const AttributedGraph& g, const AttributedGraph& p,
                             const ProbabilityMatrix& current, const RelaxationConfig& cfg,
                             bool* underflow) {
    const size_t n = g.node_count(), m = p.node_count();
    if (n == 0 || m == 0) throw Error("relaxation requires nonempty graphs");
    if (current.rows != n || current.cols != m)
        throw Error("probability matrix shape does not match the graphs");
    auto sim = [&](size_t i, size_t pp, size_t j, size_t q) {
        return edge_similarity(g.distance(i, pp), p.distance(j, q), cfg.sigma_e);
    };
    return relaxation_update(current, n, m, cfg.epsilon_support, sim, underflow);
}

RelaxationResult relax(const AttributedGraph& g, const AttributedGraph& p,
                       const RelaxationConfig& cfg) {
    const size_t n = g.node_count(), m = p.node_count();
    if (n == 0 || m == 0) throw Error("relaxation requires nonempty graphs");
    if (cfg.phi <= 0 || cfg.max_iterations < 1 || cfg.epsilon_support <= 0)
        throw Error("invalid relaxation config");

    RelaxationResult result;
    result.node_similarity = node_similarity_matrix(g, p);
    ProbabilityMatrix cur = make_priors(result.node_similarity);

    // cache pairwise edge similarities when the table fits comfortably
    const bool cached = n * m <= 4096;
    std::vector<double> table;
    if (cached) {
        table.resize(n * n * m * m);
        for (size_t i = 0; i < n; ++i)
            for (size_t pp = 0; pp < n; ++pp)
                for (size_t j = 0; j < m; ++j)
                    for (size_t q = 0; q < m; ++q)
                        table[((i * n + pp) * m + j) * m + q] =
                            edge_similarity(g.distance(i, pp), p.distance(j, q), cfg.sigma_e);
    }
    auto sim = [&](size_t i, size_t pp, size_t j, size_t q) {
        return cached ? table[((i * n + pp) * m + j) * m + q]
                      : edge_similarity(g.distance(i, pp), p.distance(j, q), cfg.sigma_e);
    };

    for (int it = 0; it < cfg.max_iterations; ++it) {
        bool underflow = false;
        ProbabilityMatrix next =
            relaxation_update(cur, n, m, cfg.epsilon_support, sim, &underflow);
        result.numerical_reset = result.numerical_reset || underflow;
        double delta = max_abs_delta(cur, next);
        result.max_delta_trace.push_back(delta);
        cur = std::move(next);
        result.iterations_used = it + 1;
        if (delta < cfg.phi) {
            result.converged = true;
            break;
        }
    }

    result.posterior = std::move(cur);
    result.assignment = assignment(result.posterior, cfg.min_posterior);
    result.score = graph_match_score(result);
    return result;
}

std::vector<std::optional<size_t>> assignment(const ProbabilityMatrix& posterior,
                                              double min_posterior) {
    std::vector<std::optional<size_t>> out(posterior.rows);
    for (size_t i = 0; i < posterior.rows; ++i) {
        size_t best = 0;
        for (size_t j = 1; j < posterior.cols; ++j)
            if (posterior.at(i, j) > posterior.at(i, best)) best = j;
        if (posterior.cols > 0 && posterior.at(i, best) >= min_posterior) out[i] = best;
    }
    return out;
}

double graph_match_score(const RelaxationResult& result) {
    const size_t n = result.posterior.rows;
    if (n == 0) return 0.0;
    const bool weighted = !result.node_similarity.p.empty();
    double sum = 0.0;
    size_t assigned = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!result.assignment[i]) continue;
        size_t j = *result.assignment[i];
        double w = weighted ? result.node_similarity.at(i, j) : 1.0;
        sum += w * result.posterior.at(i, j);
        ++assigned;
    }
    if (assigned == 0) return 0.0;
    double mean = sum / static_cast<double>(assigned);
    return mean * (static_cast<double>(assigned) / static_cast<double>(n));
}

}  // namespace facegraph
