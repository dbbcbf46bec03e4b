#include "facegraph/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "facegraph/errors.hpp"

namespace facegraph {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path fp(p);
    if (fp.is_absolute()) return fp.string();
    return (base / fp).string();
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path + "'");
    const auto base = std::filesystem::path(path).parent_path();

    std::string line;
    if (!std::getline(in, line))
        throw FormatError("manifest '" + path + "' is empty");
    auto header = split_csv_line(line);
    bool with_kp = header.size() == 4 && header[3] == "keypoints";
    if (!(header.size() == 3 || with_kp) || header[0] != "subject_id" || header[1] != "image" ||
        header[2] != "landmarks")
        throw FormatError("manifest '" + path +
                          "' has an unexpected header (want subject_id,image,landmarks[,keypoints])");

    DatasetManifest manifest;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw FormatError("manifest '" + path + "' line " + std::to_string(lineno) +
                              ": wrong column count");
        if (cells[0].empty())
            throw FormatError("manifest '" + path + "' line " + std::to_string(lineno) +
                              ": empty subject_id");
        ManifestEntry e;
        e.subject_id = cells[0];
        e.image_path = resolve(base, cells[1]);
        e.landmark_path = resolve(base, cells[2]);
        if (with_kp && !cells[3].empty()) e.keypoint_path = resolve(base, cells[3]);
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

FaceInstance prepare_face(const std::string& image_path, const std::string& landmark_path,
                          const std::optional<std::string>& keypoint_path,
                          const PipelineConfig& cfg) {
    FaceInstance face;
    face.image = load_image(image_path);
    face.landmarks = load_landmarks(landmark_path, face.image.width, face.image.height);
    std::vector<Keypoint> points =
        keypoint_path ? load_keypoints(*keypoint_path) : extract_keypoints(face.image, cfg.sift);
    double radius = cfg.roi_radius.value_or(default_roi_radius(face.image.height));
    face.groups = group_keypoints(points, face.landmarks, radius);
    for (int r = 0; r < kRegionCount; ++r) {
        std::vector<Keypoint> group = face.groups.groups[r];
        if (group.size() > cfg.max_nodes_per_region) group.resize(cfg.max_nodes_per_region);
        face.graphs[r] = build_graph(group);
    }
    return face;
}

PairMatchResult match_pair(const FaceInstance& gallery, const FaceInstance& probe,
                           const PipelineConfig& cfg) {
    PairMatchResult res;
    for (int r = 0; r < kRegionCount; ++r) {
        const AttributedGraph& g = gallery.graphs[r];
        const AttributedGraph& p = probe.graphs[r];
        if (g.node_count() == 0 || p.node_count() == 0) continue;  // MISSING
        RelaxationResult rr = relax(g, p, cfg.relaxation);
        res.region_scores[r] = rr.score;
    }
    res.outcome = fuse_region_scores(res.region_scores, cfg.fusion);
    return res;
}

std::vector<Trial> run_verification(const DatasetManifest& manifest, const PipelineConfig& cfg) {
    const size_t n = manifest.entries.size();
    std::vector<FaceInstance> faces;
    faces.reserve(n);
    for (const ManifestEntry& e : manifest.entries) {
        try {
            faces.push_back(prepare_face(e.image_path, e.landmark_path, e.keypoint_path, cfg));
        } catch (const Error& err) {
            throw Error("manifest entry '" + e.subject_id + "' (" + e.image_path +
                        "): " + err.what());
        }
    }

    std::vector<Trial> trials;
    trials.reserve(n * (n - 1));
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            PairMatchResult pm = match_pair(faces[a], faces[b], cfg);
            Trial t;
            t.gallery_id = manifest.entries[a].subject_id;
            t.probe_id = manifest.entries[b].subject_id;
            t.gallery_index = a;
            t.probe_index = b;
            t.fused_genuine_belief = pm.outcome.fused.m_genuine;
            t.is_genuine = t.gallery_id == t.probe_id;
            trials.push_back(std::move(t));
        }
    return trials;
}

ROCSummary compute_roc(const std::vector<Trial>& trials, size_t n_thresholds) {
    size_t genuines = 0, impostors = 0;
    for (const Trial& t : trials) (t.is_genuine ? genuines : impostors)++;
    if (genuines == 0 || impostors == 0)
        throw Error("ROC needs at least one genuine and one impostor trial");
    if (n_thresholds < 2) throw Error("threshold sweep needs at least 2 points");

    ROCSummary roc;
    roc.points.reserve(n_thresholds);
    double best_acc = 0.0;
    double eer = 1.0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < n_thresholds; ++k) {
        double thr = static_cast<double>(k) / static_cast<double>(n_thresholds - 1);
        size_t fa = 0, fr = 0;
        for (const Trial& t : trials) {
            bool accept = t.fused_genuine_belief >= thr;
            if (accept && !t.is_genuine) ++fa;
            if (!accept && t.is_genuine) ++fr;
        }
        ROCPoint pt;
        pt.threshold = thr;
        pt.false_accept_rate = static_cast<double>(fa) / impostors;
        pt.false_reject_rate = static_cast<double>(fr) / genuines;
        double acc = 1.0 - static_cast<double>(fa + fr) / trials.size();
        best_acc = std::max(best_acc, acc);
        double gap = std::abs(pt.false_accept_rate - pt.false_reject_rate);
        if (gap < best_gap) {
            best_gap = gap;
            // midpoint where the curves do not cross exactly at a sweep point
            eer = 0.5 * (pt.false_accept_rate + pt.false_reject_rate);
        }
        roc.points.push_back(pt);
    }
    roc.eer = eer;
    roc.best_accuracy = best_acc;
    return roc;
}

double rank1_identification(const std::vector<Trial>& trials) {
    // probe image -> (best belief, gallery subject, probe subject)
    struct Best {
        double belief = -1.0;
        std::string gallery_id;
        std::string probe_id;
    };
    std::map<size_t, Best> best;
    for (const Trial& t : trials) {
        Best& b = best[t.probe_index];
        if (t.fused_genuine_belief > b.belief) {
            b.belief = t.fused_genuine_belief;
            b.gallery_id = t.gallery_id;
            b.probe_id = t.probe_id;
        }
    }
    if (best.empty()) return 0.0;
    size_t correct = 0;
    for (const auto& [idx, b] : best)
        if (b.gallery_id == b.probe_id) ++correct;
    return static_cast<double>(correct) / static_cast<double>(best.size());
}

void save_roc_csv(const ROCSummary& roc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "threshold,far,frr\n";
    char buf[96];
    for (const ROCPoint& pt : roc.points) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.9g,%.9g\n", pt.threshold, pt.false_accept_rate,
                      pt.false_reject_rate);
        out << buf;
    }
    if (!out) throw IoError("failed writing ROC to '" + path + "'");
}

}  // namespace facegraph
