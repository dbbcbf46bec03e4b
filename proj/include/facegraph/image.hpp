#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace facegraph {

/// 8-bit grayscale image decoded to luminance values in [0,1], row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    float at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    float& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
};

inline constexpr int kMaxImageDimension = 4096;

/// Reads a binary PGM (P5, maxval 255). Throws IoError on a missing file,
/// FormatError on a malformed header or truncated pixel data, and
/// UnsupportedError when maxval is not 255.
GrayImage load_image(const std::string& path);

/// Writes a binary PGM (P5, maxval 255), clamping values to [0,1].
void save_image(const GrayImage& img, const std::string& path);

}  // namespace facegraph
