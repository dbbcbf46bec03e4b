#include "facegraph/fusion.hpp"

#include <string>

#include "facegraph/errors.hpp"

namespace facegraph {

MassFunction score_to_mass(double score, double alpha) {
    if (score < 0.0 || score > 1.0)
        throw Error("score out of range [0,1]: " + std::to_string(score));
    if (alpha < 0.0 || alpha > 1.0)
        throw Error("alpha out of range [0,1]: " + std::to_string(alpha));
    return {(1.0 - alpha) * score, (1.0 - alpha) * (1.0 - score), alpha};
}

MassFunction dempster_combine(const MassFunction& a, const MassFunction& b) {
    const double conflict = a.m_genuine * b.m_impostor + a.m_impostor * b.m_genuine;
    const double norm = 1.0 - conflict;
    if (norm <= 0.0)
        throw ConflictError("total conflict (K = 1): evidence cannot be combined");
    MassFunction out;
    out.m_genuine =
        (a.m_genuine * b.m_genuine + a.m_genuine * b.m_uncertain + a.m_uncertain * b.m_genuine) /
        norm;
    out.m_impostor = (a.m_impostor * b.m_impostor + a.m_impostor * b.m_uncertain +
                      a.m_uncertain * b.m_impostor) /
                     norm;
    out.m_uncertain = (a.m_uncertain * b.m_uncertain) / norm;
    return out;
}

FusionOutcome fuse_region_scores(const std::array<std::optional<double>, kRegionCount>& scores,
                                 const FusionConfig& cfg) {
    bool any = false;
    for (const auto& s : scores) any = any || s.has_value();
    if (!any) throw Error("no region produced a match score");

    MassFunction fused = kVacuousMass;
    for (Region r : kRegionOrder) {
        const auto& s = scores[static_cast<int>(r)];
        if (!s) {
            if (cfg.missing_region_policy == MissingRegionPolicy::Vacuous)
                fused = dempster_combine(fused, kVacuousMass);
            continue;
        }
        fused = dempster_combine(fused, score_to_mass(*s, cfg.uncertainty_alpha));
    }
    return {fused, fused.m_genuine >= cfg.decision_threshold};
}

}  // namespace facegraph
