#pragma once

#include <array>
#include <string>
#include <vector>

#include "facegraph/keypoint.hpp"

namespace facegraph {

enum class Region { LeftEye = 0, RightEye = 1, Nose = 2, Mouth = 3 };
inline constexpr int kRegionCount = 4;

/// Fixed region precedence used for ROI tie-breaking and fusion order.
inline constexpr std::array<Region, kRegionCount> kRegionOrder = {
    Region::LeftEye, Region::RightEye, Region::Nose, Region::Mouth};

const char* region_name(Region r);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Annotated centers of the four salient landmarks.
struct LandmarkSet {
    std::array<Point2, kRegionCount> centers{};

    const Point2& center(Region r) const { return centers[static_cast<int>(r)]; }
    Point2& center(Region r) { return centers[static_cast<int>(r)]; }
};

/// Keypoints partitioned into the four circular ROIs. Groups are disjoint:
/// a keypoint goes to the nearest center within roi_radius, ties broken by
/// region precedence; keypoints outside every ROI are dropped.
struct RegionGroups {
    std::array<std::vector<Keypoint>, kRegionCount> groups;
    double roi_radius = 0.0;

    const std::vector<Keypoint>& group(Region r) const { return groups[static_cast<int>(r)]; }
};

/// Parses a four-line annotation file (`region_name x y` per line) and
/// validates coordinates against the image bounds.
LandmarkSet load_landmarks(const std::string& path, int image_width, int image_height);

RegionGroups group_keypoints(const std::vector<Keypoint>& points, const LandmarkSet& lm,
                             double radius);

/// Default ROI radius for a given image height (0.18 * height).
double default_roi_radius(int image_height);

}  // namespace facegraph
