#pragma once

// Deterministic synthetic imagery for tests: Gaussian blob scenes and a
// small procedurally generated face corpus (per-subject blob constellations
// around the four landmark sites, per-image shift/brightness/jitter).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "facegraph/image.hpp"
#include "facegraph/landmarks.hpp"

namespace facegraph::testsupport {

inline void add_blob(GrayImage& img, double cx, double cy, double sigma, double amplitude) {
    const int radius = static_cast<int>(std::ceil(4 * sigma));
    const int x0 = std::max(0, static_cast<int>(cx) - radius);
    const int x1 = std::min(img.width - 1, static_cast<int>(cx) + radius);
    const int y0 = std::max(0, static_cast<int>(cy) - radius);
    const int y1 = std::min(img.height - 1, static_cast<int>(cy) + radius);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            double dx = x - cx, dy = y - cy;
            img.at(x, y) += static_cast<float>(
                amplitude * std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)));
        }
}

inline GrayImage flat_image(int w, int h, float value) {
    GrayImage img;
    img.width = w;
    img.height = h;
    img.data.assign(static_cast<size_t>(w) * h, value);
    return img;
}

inline void clamp01(GrayImage& img) {
    for (float& v : img.data) v = std::clamp(v, 0.0f, 1.0f);
}

/// Single bright blob on a dark background.
inline GrayImage blob_image(int w, int h, double cx, double cy, double sigma) {
    GrayImage img = flat_image(w, h, 0.1f);
    add_blob(img, cx, cy, sigma, 0.8);
    clamp01(img);
    return img;
}

/// Several blobs of mixed size/polarity; enough structure for keypoints.
inline GrayImage blob_scene(int w, int h, uint32_t seed, int n_blobs, int margin = 16) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(margin, w - 1.0 - margin);
    std::uniform_real_distribution<double> uy(margin, h - 1.0 - margin);
    std::uniform_real_distribution<double> usig(1.8, 4.0);
    std::uniform_real_distribution<double> uamp(0.25, 0.55);
    GrayImage img = flat_image(w, h, 0.45f);
    for (int i = 0; i < n_blobs; ++i) {
        double cx = ux(rng), cy = uy(rng), sig = usig(rng), amp = uamp(rng);
        add_blob(img, cx, cy, sig, (rng() & 1) ? amp : -amp);
    }
    clamp01(img);
    return img;
}

/// Counter-clockwise 90-degree rotation; pixel (x,y) maps to (y, W-1-x).
inline GrayImage rotate90ccw(const GrayImage& src) {
    GrayImage dst;
    dst.width = src.height;
    dst.height = src.width;
    dst.data.resize(src.data.size());
    for (int y = 0; y < dst.height; ++y)
        for (int x = 0; x < dst.width; ++x) dst.at(x, y) = src.at(src.width - 1 - y, x);
    return dst;
}

inline GrayImage translate(const GrayImage& src, int dx, int dy, float fill) {
    GrayImage dst = flat_image(src.width, src.height, fill);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) {
            int nx = x + dx, ny = y + dy;
            if (nx >= 0 && nx < src.width && ny >= 0 && ny < src.height)
                dst.at(nx, ny) = src.at(x, y);
        }
    return dst;
}

struct SyntheticFace {
    GrayImage image;
    LandmarkSet landmarks;
};

/// 140x100 face-like image: a per-subject constellation of blobs anchored
/// at the four landmark sites plus scattered texture, with a per-variant
/// global shift, brightness change, position jitter and pixel noise.
inline SyntheticFace make_face(uint32_t subject, uint32_t variant) {
    const int W = 100, H = 140;
    const double base_lm[4][2] = {{32, 55}, {68, 55}, {50, 85}, {50, 112}};

    struct Blob {
        double x, y, sigma, amp;
    };
    std::vector<Blob> blobs;
    std::mt19937 srng(7919u + subject * 131u);
    std::uniform_real_distribution<double> uoff(-13.0, 13.0);
    std::uniform_real_distribution<double> usig(1.8, 3.2);
    std::uniform_real_distribution<double> uamp(0.28, 0.55);
    for (const auto& lm : base_lm)
        for (int b = 0; b < 6; ++b) {
            double x = lm[0] + uoff(srng), y = lm[1] + uoff(srng);
            double sig = usig(srng), amp = uamp(srng);
            blobs.push_back({x, y, sig, (srng() & 1) ? amp : -amp});
        }
    std::uniform_real_distribution<double> ufx(18.0, W - 19.0);
    std::uniform_real_distribution<double> ufy(20.0, H - 21.0);
    for (int b = 0; b < 10; ++b)
        blobs.push_back({ufx(srng), ufy(srng), usig(srng), ((srng() & 1) ? 1 : -1) * uamp(srng)});

    std::mt19937 vrng(104729u + subject * 977u + variant);
    std::uniform_int_distribution<int> ushift(-2, 2);
    std::uniform_real_distribution<double> ubright(0.9, 1.1);
    std::normal_distribution<double> ujit(0.0, 0.4);
    std::uniform_real_distribution<double> unoise(-0.01, 0.01);
    const int dx = ushift(vrng), dy = ushift(vrng);
    const double bright = ubright(vrng);

    SyntheticFace face;
    face.image = flat_image(W, H, 0.0f);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
            face.image.at(x, y) = static_cast<float>(0.38 + 0.08 * y / H);
    for (const Blob& b : blobs)
        add_blob(face.image, b.x + dx + ujit(vrng), b.y + dy + ujit(vrng), b.sigma,
                 b.amp * bright);
    for (float& v : face.image.data) v += static_cast<float>(unoise(vrng));
    clamp01(face.image);

    for (int i = 0; i < kRegionCount; ++i)
        face.landmarks.centers[i] = {base_lm[i][0] + dx, base_lm[i][1] + dy};
    return face;
}

}  // namespace facegraph::testsupport
