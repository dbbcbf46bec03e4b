#pragma once

#include <vector>

#include "facegraph/image.hpp"
#include "facegraph/keypoint.hpp"

namespace facegraph {

/// Difference-of-Gaussians scale-space extraction. Keypoints are DoG
/// extrema surviving contrast and edge-response rejection, localized
/// sub-pixel by a 3D quadratic fit, one output per dominant orientation.
/// Output order is canonical: octave, then scale layer, then y, then x,
/// then orientation. Throws Error when the image is smaller than 32x32.
std::vector<Keypoint> extract_keypoints(const GrayImage& image, const SiftConfig& cfg = {});

}  // namespace facegraph
