#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "facegraph/errors.hpp"
#include "facegraph/eval.hpp"

namespace {

using namespace facegraph;

struct CommonOpts {
    PipelineConfig cfg;
    double roi_radius = -1.0;  // <=0 means default (0.18 * image height)

    void apply() {
        if (roi_radius > 0) cfg.roi_radius = roi_radius;
    }
};

void add_pipeline_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--roi-radius", o.roi_radius,
                    "ROI radius in pixels (default 0.18 * image height)");
    cmd->add_option("--phi", o.cfg.relaxation.phi, "relaxation convergence threshold");
    cmd->add_option("--max-iters", o.cfg.relaxation.max_iterations, "relaxation iteration cap");
    cmd->add_option("--sigma-e", o.cfg.relaxation.sigma_e,
                    "edge-similarity length scale in pixels");
    cmd->add_option("--min-posterior", o.cfg.relaxation.min_posterior,
                    "posterior floor for node assignment");
    cmd->add_option("--max-nodes", o.cfg.max_nodes_per_region, "node cap per regional graph");
    cmd->add_option("--alpha", o.cfg.fusion.uncertainty_alpha,
                    "uncertainty mass reserved per region");
    cmd->add_option("--threshold", o.cfg.fusion.decision_threshold,
                    "fused genuine-belief decision threshold");
}

void add_sift_flags(CLI::App* cmd, SiftConfig& s) {
    cmd->add_option("--octaves", s.octaves, "scale-space octaves");
    cmd->add_option("--scales-per-octave", s.scales_per_octave, "scales per octave");
    cmd->add_option("--contrast-threshold", s.contrast_threshold, "DoG contrast rejection");
    cmd->add_option("--edge-threshold", s.edge_response_threshold, "edge-response ratio cap");
}

int run_extract(const std::string& image_path, const std::string& out_path,
                const SiftConfig& sift) {
    GrayImage img = load_image(image_path);
    std::vector<Keypoint> points = extract_keypoints(img, sift);
    save_keypoints(points, out_path);
    std::printf("%zu\n", points.size());
    return 0;
}

int run_match(const std::string& g_img, const std::string& g_lm, const std::string& p_img,
              const std::string& p_lm, const std::vector<std::string>& keypoints_in,
              CommonOpts& o) {
    o.apply();
    std::optional<std::string> g_kp, p_kp;
    if (keypoints_in.size() == 2) {
        g_kp = keypoints_in[0];
        p_kp = keypoints_in[1];
    } else if (!keypoints_in.empty()) {
        throw Error("--keypoints-in expects exactly two paths (gallery, probe)");
    }

    FaceInstance gallery = prepare_face(g_img, g_lm, g_kp, o.cfg);
    FaceInstance probe = prepare_face(p_img, p_lm, p_kp, o.cfg);
    PairMatchResult res = match_pair(gallery, probe, o.cfg);

    for (int r = 0; r < kRegionCount; ++r) {
        const auto& s = res.region_scores[r];
        if (s)
            std::printf("%s=%.6f\n", region_name(static_cast<Region>(r)), *s);
        else
            std::printf("%s=MISSING\n", region_name(static_cast<Region>(r)));
    }
    std::printf("fused_genuine_belief=%.6f\n", res.outcome.fused.m_genuine);
    std::printf("%s\n", res.outcome.accept ? "ACCEPT" : "REJECT");
    return res.outcome.accept ? 0 : 1;
}

int run_evaluate(const std::string& manifest_path, const std::string& roc_path, size_t sweep,
                 CommonOpts& o) {
    o.apply();
    DatasetManifest manifest = load_manifest(manifest_path);
    std::vector<Trial> trials = run_verification(manifest, o.cfg);
    ROCSummary roc = compute_roc(trials, sweep);
    save_roc_csv(roc, roc_path);
    double rank1 = rank1_identification(trials);
    std::printf("eer=%.6f best_accuracy=%.6f rank1=%.6f\n", roc.eer, roc.best_accuracy, rank1);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Face verification by salient-landmark graph matching"};
    app.require_subcommand(1);

    // extract
    std::string ex_image, ex_out;
    SiftConfig ex_sift;
    CLI::App* extract = app.add_subcommand("extract", "extract keypoints from a PGM image");
    extract->add_option("image", ex_image, "input PGM (P5) image")->required();
    extract->add_option("--keypoints-out", ex_out, "output keypoint CSV")->required();
    add_sift_flags(extract, ex_sift);

    // match
    std::string m_gimg, m_glm, m_pimg, m_plm;
    std::vector<std::string> m_kp_in;
    CommonOpts m_opts;
    CLI::App* match = app.add_subcommand("match", "verify one gallery/probe pair");
    match->add_option("gallery_image", m_gimg, "gallery PGM image")->required();
    match->add_option("gallery_landmarks", m_glm, "gallery landmark annotation")->required();
    match->add_option("probe_image", m_pimg, "probe PGM image")->required();
    match->add_option("probe_landmarks", m_plm, "probe landmark annotation")->required();
    match->add_option("--keypoints-in", m_kp_in,
                      "precomputed keypoint CSVs: gallery then probe")
        ->expected(2);
    add_pipeline_flags(match, m_opts);
    add_sift_flags(match, m_opts.cfg.sift);

    // evaluate
    std::string e_manifest, e_roc = "roc.csv";
    size_t e_sweep = 1001;
    CommonOpts e_opts;
    CLI::App* evaluate = app.add_subcommand("evaluate", "batch all-vs-all ROC evaluation");
    evaluate->add_option("manifest", e_manifest, "dataset manifest CSV")->required();
    evaluate->add_option("--roc-out", e_roc, "output ROC CSV path");
    evaluate->add_option("--sweep", e_sweep, "number of threshold sweep points");
    add_pipeline_flags(evaluate, e_opts);
    add_sift_flags(evaluate, e_opts.cfg.sift);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (extract->parsed()) return run_extract(ex_image, ex_out, ex_sift);
        if (match->parsed()) return run_match(m_gimg, m_glm, m_pimg, m_plm, m_kp_in, m_opts);
        if (evaluate->parsed()) return run_evaluate(e_manifest, e_roc, e_sweep, e_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
