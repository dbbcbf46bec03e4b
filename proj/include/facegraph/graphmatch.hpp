#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "facegraph/keypoint.hpp"

namespace facegraph {

/// Complete attributed graph over a regional keypoint group: nodes carry
/// descriptors, edges carry Euclidean pixel distances between keypoints.
class AttributedGraph {
public:
    AttributedGraph() = default;
    explicit AttributedGraph(std::vector<Keypoint> nodes);

    size_t node_count() const { return nodes_.size(); }
    size_t edge_count() const { return nodes_.size() * (nodes_.size() - 1) / 2; }
    const Keypoint& node(size_t i) const { return nodes_[i]; }
    const std::vector<Keypoint>& nodes() const { return nodes_; }
    double distance(size_t i, size_t p) const { return dist_[i * nodes_.size() + p]; }

private:
    std::vector<Keypoint> nodes_;
    std::vector<double> dist_;  // full symmetric matrix, zero diagonal
};

AttributedGraph build_graph(const std::vector<Keypoint>& group);

/// Row-major matrix with gallery rows and probe columns.
struct ProbabilityMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> p;

    double at(size_t i, size_t j) const { return p[i * cols + j]; }
    double& at(size_t i, size_t j) { return p[i * cols + j]; }
};

struct RelaxationConfig {
    double phi = 1e-4;              // stop when max |P - P_hat| drops below this
    int max_iterations = 50;
    double epsilon_support = 1e-300;  // floor for each inner support sum
    double sigma_e = 10.0;          // edge-similarity length scale, pixels
    double min_posterior = 0.5;     // assignment floor
};

struct RelaxationResult {
    ProbabilityMatrix posterior;
    ProbabilityMatrix node_similarity;  // the raw descriptor similarities
    std::vector<std::optional<size_t>> assignment;  // gallery node -> probe node
    int iterations_used = 0;
    bool converged = false;
    bool numerical_reset = false;  // some row underflowed and was reset to uniform
    double score = 0.0;
    std::vector<double> max_delta_trace;  // per-iteration max |P - P_hat|
};

/// Descriptor similarity of every gallery/probe node pair. Throws on an
/// empty graph.
ProbabilityMatrix node_similarity_matrix(const AttributedGraph& g, const AttributedGraph& p);

/// exp(-|d_gallery - d_probe| / sigma_e); 1 iff the distances are equal.
double edge_similarity(double d_gallery, double d_probe, double sigma_e);

/// Priors: node similarities row-normalized (all-zero rows become uniform).
ProbabilityMatrix make_priors(const ProbabilityMatrix& similarities);

/// One relaxation update of the probability matrix (support product over
/// the other gallery nodes, then row renormalization). Exposed for
/// oracle-level testing; `relax` applies it iteratively with cached edge
/// similarities. Sets *underflow when a row had to be reset to uniform.
ProbabilityMatrix relax_once(const AttributedGraph& g, const AttributedGraph& p,
                             const ProbabilityMatrix& current, const RelaxationConfig& cfg,
                             bool* underflow = nullptr);

/// Iterative probabilistic relaxation of the gallery-to-probe labeling.
/// Throws Error when either graph is empty.
RelaxationResult relax(const AttributedGraph& g, const AttributedGraph& p,
                       const RelaxationConfig& cfg = {});

/// Per-row argmax above the floor; ties go to the lowest probe index.
std::vector<std::optional<size_t>> assignment(const ProbabilityMatrix& posterior,
                                              double min_posterior);

/// Mean over assigned nodes of (posterior maximum x descriptor similarity
/// of the matched pair), scaled by the assigned fraction of gallery nodes.
/// The similarity weighting keeps the score tied to appearance: relaxation
/// posteriors saturate toward 1 at convergence even between different
/// faces, so posterior confidence alone does not discriminate. When
/// result.node_similarity is empty the weight is 1. Empty assignment
/// scores 0.
double graph_match_score(const RelaxationResult& result);

}  // namespace facegraph
