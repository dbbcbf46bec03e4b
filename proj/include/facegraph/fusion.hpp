#pragma once

#include <array>
#include <optional>

#include "facegraph/landmarks.hpp"

namespace facegraph {

/// Basic probability assignment over the frame {genuine, impostor};
/// m_uncertain is the mass on the full frame.
struct MassFunction {
    double m_genuine = 0.0;
    double m_impostor = 0.0;
    double m_uncertain = 1.0;
};

/// All mass on the frame: the identity of Dempster combination.
inline constexpr MassFunction kVacuousMass{0.0, 0.0, 1.0};

enum class MissingRegionPolicy { Vacuous, Skip };

struct FusionConfig {
    double uncertainty_alpha = 0.1;
    double decision_threshold = 0.5;
    MissingRegionPolicy missing_region_policy = MissingRegionPolicy::Vacuous;
};

/// Linear bridge from a regional match score to a mass function, reserving
/// alpha for the uncertainty set.
MassFunction score_to_mass(double score, double alpha);

/// Dempster's rule on the two-hypothesis frame. Throws ConflictError on
/// total conflict (K = 1).
MassFunction dempster_combine(const MassFunction& a, const MassFunction& b);

struct FusionOutcome {
    MassFunction fused;
    bool accept = false;
};

/// Combines the per-region scores (fixed region order) into one mass
/// function and thresholds the fused genuine belief. Missing regions
/// contribute vacuous mass or are skipped per config; both give the same
/// fused mass. Throws Error when every region is missing.
FusionOutcome fuse_region_scores(const std::array<std::optional<double>, kRegionCount>& scores,
                                 const FusionConfig& cfg);

}  // namespace facegraph
