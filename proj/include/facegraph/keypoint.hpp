#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace facegraph {

inline constexpr size_t kDescriptorSize = 128;

/// Scale-invariant keypoint: sub-pixel location, Gaussian scale, dominant
/// orientation in [0,2pi), and a unit-norm 128-element descriptor.
struct Keypoint {
    double x = 0.0;
    double y = 0.0;
    double scale = 1.0;
    double orientation = 0.0;
    std::array<float, kDescriptorSize> descriptor{};
};

struct SiftConfig {
    int octaves = 4;
    int scales_per_octave = 3;
    double contrast_threshold = 0.03;
    double edge_response_threshold = 10.0;
    double descriptor_clamp = 0.2;
};

/// Normalized dot product of two unit descriptors, clamped to [0,1].
/// Descriptors are non-negative so the dot already lies in [0,1];
/// equals 1 iff the descriptors coincide. Throws Error on length mismatch
/// (only reachable through the span overload).
double descriptor_similarity(const Keypoint& a, const Keypoint& b);
double descriptor_similarity(const std::vector<float>& a, const std::vector<float>& b);

/// Keypoint CSV: header `x,y,scale,orientation,d0,...,d127`, one row per
/// keypoint, decimal fields. Round-trip is lossless within 1e-6 per field.
void save_keypoints(const std::vector<Keypoint>& points, const std::string& path);
std::vector<Keypoint> load_keypoints(const std::string& path);

}  // namespace facegraph
