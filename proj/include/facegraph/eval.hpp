#pragma once

#include <optional>
#include <string>
#include <vector>

#include "facegraph/fusion.hpp"
#include "facegraph/graphmatch.hpp"
#include "facegraph/landmarks.hpp"
#include "facegraph/sift.hpp"

namespace facegraph {

struct ManifestEntry {
    std::string subject_id;
    std::string image_path;
    std::string landmark_path;
    std::optional<std::string> keypoint_path;  // precomputed descriptors
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
};

/// CSV with header `subject_id,image,landmarks[,keypoints]`. Relative
/// paths are resolved against the manifest's directory.
DatasetManifest load_manifest(const std::string& path);

/// Full-pipeline settings for one verification run.
struct PipelineConfig {
    SiftConfig sift;
    std::optional<double> roi_radius;  // pixels; default 0.18 * image height
    RelaxationConfig relaxation;
    FusionConfig fusion;
    size_t max_nodes_per_region = 30;  // regional graphs truncate to the
                                       // first N keypoints in extraction order
};

struct Trial {
    std::string gallery_id;
    std::string probe_id;
    size_t gallery_index = 0;  // manifest entry indices
    size_t probe_index = 0;
    double fused_genuine_belief = 0.0;
    bool is_genuine = false;
};

struct ROCPoint {
    double threshold = 0.0;
    double false_accept_rate = 0.0;
    double false_reject_rate = 0.0;
};

struct ROCSummary {
    std::vector<ROCPoint> points;
    double eer = 0.0;
    double best_accuracy = 0.0;
};

/// Runs every ordered pair of distinct manifest entries through the full
/// pipeline (extract or load keypoints, group, per-region relaxation,
/// fusion). Regions empty on either side count as MISSING evidence.
std::vector<Trial> run_verification(const DatasetManifest& manifest, const PipelineConfig& cfg);

/// Uniform threshold sweep over [0,1]. Accept rule: belief >= threshold.
ROCSummary compute_roc(const std::vector<Trial>& trials, size_t n_thresholds = 1001);

/// Fraction of probe images whose highest-belief gallery image belongs to
/// the probe's subject.
double rank1_identification(const std::vector<Trial>& trials);

void save_roc_csv(const ROCSummary& roc, const std::string& path);

/// Per-region match scores plus fused outcome for one gallery/probe pair;
/// backs the single-pair CLI verdict.
struct PairMatchResult {
    std::array<std::optional<double>, kRegionCount> region_scores;
    FusionOutcome outcome;
};

struct FaceInstance {
    GrayImage image;
    LandmarkSet landmarks;
    RegionGroups groups;
    std::array<AttributedGraph, kRegionCount> graphs;
};

/// Loads one image + annotation (keypoints extracted or read from file)
/// and builds its regional graphs.
FaceInstance prepare_face(const std::string& image_path, const std::string& landmark_path,
                          const std::optional<std::string>& keypoint_path,
                          const PipelineConfig& cfg);

PairMatchResult match_pair(const FaceInstance& gallery, const FaceInstance& probe,
                           const PipelineConfig& cfg);

}  // namespace facegraph
