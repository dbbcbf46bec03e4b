#include "facegraph/sift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "facegraph/errors.hpp"

namespace facegraph {

namespace {

constexpr double kSigmaBase = 1.6;     // blur of the first layer of each octave
constexpr double kSigmaInput = 0.5;    // assumed blur of the raw input
constexpr int kOrientationBins = 36;
constexpr double kOrientationSigmaFactor = 1.5;
constexpr double kOrientationPeakRatio = 0.8;
constexpr int kDescrWidth = 4;         // 4x4 spatial grid
constexpr int kDescrOrientBins = 8;
constexpr double kDescrScaleFactor = 3.0;
constexpr int kMaxInterpSteps = 5;
constexpr int kBorder = 5;             // extrema ignored inside this margin
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Candidate {
    int octave;
    double x, y;        // input-image coordinates
    double scale;       // absolute Gaussian scale
    double scale_octv;  // octave-relative scale, for windowing
    int layer;          // gaussian layer used for orientation/descriptor
    double row_octv, col_octv;  // octave-relative sub-pixel position
};

GrayImage gaussian_blur(const GrayImage& src, double sigma) {
    if (sigma <= 0.0) return src;
    int radius = std::max(1, static_cast<int>(std::ceil(sigma * 4.0)));
    std::vector<float> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
        kernel[i + radius] = static_cast<float>(v);
        sum += v;
    }
    for (float& k : kernel) k = static_cast<float>(k / sum);

    const int w = src.width, h = src.height;
    auto reflect = [](int i, int n) {
        while (i < 0 || i >= n) {
            if (i < 0) i = -i - 1;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return i;
    };

    GrayImage tmp{w, h, std::vector<float>(src.data.size())};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * src.at(reflect(x + k, w), y);
            tmp.at(x, y) = acc;
        }
    GrayImage dst{w, h, std::vector<float>(src.data.size())};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * tmp.at(x, reflect(y + k, h));
            dst.at(x, y) = acc;
        }
    return dst;
}

GrayImage downsample2(const GrayImage& src) {
    GrayImage dst;
    dst.width = std::max(1, src.width / 2);
    dst.height = std::max(1, src.height / 2);
    dst.data.resize(static_cast<size_t>(dst.width) * dst.height);
    for (int y = 0; y < dst.height; ++y)
        for (int x = 0; x < dst.width; ++x) dst.at(x, y) = src.at(2 * x, 2 * y);
    return dst;
}

// Solves the 3x3 system H*dx = -g for the quadratic fit offset.
bool solve3x3(const double h[3][3], const double g[3], double out[3]) {
    double a[3][4] = {{h[0][0], h[0][1], h[0][2], -g[0]},
                      {h[1][0], h[1][1], h[1][2], -g[1]},
                      {h[2][0], h[2][1], h[2][2], -g[2]}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) return false;
        if (piv != col)
            for (int c = 0; c < 4; ++c) std::swap(a[piv][c], a[col][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    for (int i = 0; i < 3; ++i) out[i] = a[i][3] / a[i][i];
    return true;
}

// Gradient magnitude/angle at (row, col); returns false at borders.
bool gradient(const GrayImage& img, int row, int col, double& mag, double& angle) {
    if (col <= 0 || col >= img.width - 1 || row <= 0 || row >= img.height - 1) return false;
    double dx = img.at(col + 1, row) - img.at(col - 1, row);
    double dy = img.at(col, row - 1) - img.at(col, row + 1);
    mag = std::sqrt(dx * dx + dy * dy);
    angle = std::atan2(dy, dx);
    if (angle < 0) angle += kTwoPi;
    return true;
}

// 36-bin gradient-orientation histogram around the candidate, smoothed once.
std::vector<double> orientation_histogram(const GrayImage& gauss, const Candidate& cand) {
    std::vector<double> hist(kOrientationBins, 0.0);
    const double sigma = kOrientationSigmaFactor * cand.scale_octv;
    const int radius = std::max(1, static_cast<int>(std::lround(3.0 * sigma)));
    const double wfac = -1.0 / (2.0 * sigma * sigma);
    const int r0 = static_cast<int>(std::lround(cand.row_octv));
    const int c0 = static_cast<int>(std::lround(cand.col_octv));

    for (int i = -radius; i <= radius; ++i)
        for (int j = -radius; j <= radius; ++j) {
            double mag, angle;
            if (!gradient(gauss, r0 + i, c0 + j, mag, angle)) continue;
            double w = std::exp((i * i + j * j) * wfac);
            int bin = static_cast<int>(std::lround(angle / kTwoPi * kOrientationBins));
            bin = ((bin % kOrientationBins) + kOrientationBins) % kOrientationBins;
            hist[bin] += w * mag;
        }

    std::vector<double> smooth(kOrientationBins);
    for (int i = 0; i < kOrientationBins; ++i) {
        auto at = [&](int k) { return hist[((k % kOrientationBins) + kOrientationBins) % kOrientationBins]; };
        smooth[i] = (at(i - 2) + at(i + 2)) * (1.0 / 16.0) +
                    (at(i - 1) + at(i + 1)) * (4.0 / 16.0) + at(i) * (6.0 / 16.0);
    }
    return smooth;
}

std::array<float, kDescriptorSize> compute_descriptor(const GrayImage& gauss,
                                                      const Candidate& cand, double orientation,
                                                      double clamp_thr) {
    const int d = kDescrWidth, n = kDescrOrientBins;
    const double hist_width = kDescrScaleFactor * cand.scale_octv;
    const double cos_t = std::cos(orientation) / hist_width;
    const double sin_t = std::sin(orientation) / hist_width;
    const double bins_per_rad = n / kTwoPi;
    const double exp_scale = -1.0 / (d * d * 0.5);
    int radius = static_cast<int>(
        std::lround(hist_width * std::numbers::sqrt2 * (d + 1) * 0.5));
    radius = std::min(radius, static_cast<int>(std::hypot(gauss.width, gauss.height)));

    // (d+2)^2 spatial bins with a 1-bin apron, orientation wraps circularly
    std::vector<double> hist(static_cast<size_t>(d + 2) * (d + 2) * n, 0.0);
    const int r0 = static_cast<int>(std::lround(cand.row_octv));
    const int c0 = static_cast<int>(std::lround(cand.col_octv));

    for (int i = -radius; i <= radius; ++i)
        for (int j = -radius; j <= radius; ++j) {
            double c_rot = j * cos_t - i * sin_t;
            double r_rot = j * sin_t + i * cos_t;
            double rbin = r_rot + d / 2.0 - 0.5;
            double cbin = c_rot + d / 2.0 - 0.5;
            if (rbin <= -1 || rbin >= d || cbin <= -1 || cbin >= d) continue;
            double mag, angle;
            if (!gradient(gauss, r0 + i, c0 + j, mag, angle)) continue;
            double w = std::exp((c_rot * c_rot + r_rot * r_rot) * exp_scale);
            double obin = (angle - orientation) * bins_per_rad;

            int ri = static_cast<int>(std::floor(rbin));
            int ci = static_cast<int>(std::floor(cbin));
            int oi = static_cast<int>(std::floor(obin));
            double rf = rbin - ri, cf = cbin - ci, of = obin - oi;
            oi = ((oi % n) + n) % n;

            double v = w * mag;
            for (int dr = 0; dr <= 1; ++dr)
                for (int dc = 0; dc <= 1; ++dc)
                    for (int dob = 0; dob <= 1; ++dob) {
                        int rr = ri + dr + 1, cc = ci + dc + 1;
                        int oo = (oi + dob) % n;
                        double wt = v * (dr ? rf : 1 - rf) * (dc ? cf : 1 - cf) *
                                    (dob ? of : 1 - of);
                        hist[(static_cast<size_t>(rr) * (d + 2) + cc) * n + oo] += wt;
                    }
        }

    std::array<float, kDescriptorSize> desc{};
    size_t idx = 0;
    for (int r = 1; r <= d; ++r)
        for (int c = 1; c <= d; ++c)
            for (int o = 0; o < n; ++o)
                desc[idx++] =
                    static_cast<float>(hist[(static_cast<size_t>(r) * (d + 2) + c) * n + o]);

    auto renorm = [&desc]() {
        double nrm = 0.0;
        for (float v : desc) nrm += static_cast<double>(v) * v;
        nrm = std::sqrt(nrm);
        if (nrm > 1e-12)
            for (float& v : desc) v = static_cast<float>(v / nrm);
    };
    renorm();
    for (float& v : desc)
        v = std::min(v, static_cast<float>(clamp_thr));
    renorm();
    return desc;
}

}  // namespace

std::vector<Keypoint> extract_keypoints(const GrayImage& image, const SiftConfig& cfg) {
    if (image.width < 32 || image.height < 32)
        throw Error("image too small for keypoint extraction: " + std::to_string(image.width) +
                    "x" + std::to_string(image.height) + " (minimum 32x32)");
    if (cfg.octaves < 1 || cfg.scales_per_octave < 2 || cfg.contrast_threshold <= 0 ||
        cfg.edge_response_threshold <= 0 || cfg.descriptor_clamp <= 0)
        throw Error("invalid extraction config");

    const int S = cfg.scales_per_octave;
    const int layers = S + 3;
    const double k = std::pow(2.0, 1.0 / S);

    // per-layer incremental blurs
    std::vector<double> sig(layers);
    sig[0] = kSigmaBase;
    for (int i = 1; i < layers; ++i) {
        double prev = kSigmaBase * std::pow(k, i - 1);
        double total = prev * k;
        sig[i] = std::sqrt(total * total - prev * prev);
    }

    GrayImage base =
        gaussian_blur(image, std::sqrt(std::max(kSigmaBase * kSigmaBase -
                                                kSigmaInput * kSigmaInput, 0.01)));

    std::vector<Candidate> candidates;
    std::vector<Keypoint> keypoints;

    GrayImage octave_base = std::move(base);
    for (int o = 0; o < cfg.octaves; ++o) {
        if (std::min(octave_base.width, octave_base.height) < 2 * kBorder + 2) break;

        std::vector<GrayImage> gauss(layers);
        gauss[0] = octave_base;
        for (int i = 1; i < layers; ++i) gauss[i] = gaussian_blur(gauss[i - 1], sig[i]);
        std::vector<GrayImage> dog(layers - 1);
        for (int i = 0; i < layers - 1; ++i) {
            dog[i] = gauss[i];
            for (size_t px = 0; px < dog[i].data.size(); ++px)
                dog[i].data[px] = gauss[i + 1].data[px] - gauss[i].data[px];
        }

        const int w = octave_base.width, h = octave_base.height;
        const double scale_mult = std::pow(2.0, o);
        const float prelim_thr =
            static_cast<float>(0.5 * cfg.contrast_threshold / S);

        for (int layer = 1; layer <= S; ++layer) {
            const GrayImage& prev = dog[layer - 1];
            const GrayImage& cur = dog[layer];
            const GrayImage& next = dog[layer + 1];
            for (int r = kBorder; r < h - kBorder; ++r)
                for (int c = kBorder; c < w - kBorder; ++c) {
                    float v = cur.at(c, r);
                    if (std::abs(v) <= prelim_thr) continue;
                    bool is_max = true, is_min = true;
                    for (int dr = -1; dr <= 1 && (is_max || is_min); ++dr)
                        for (int dc = -1; dc <= 1; ++dc) {
                            float a = prev.at(c + dc, r + dr);
                            float b = cur.at(c + dc, r + dr);
                            float d2 = next.at(c + dc, r + dr);
                            if (a >= v || d2 >= v || (b >= v && !(dr == 0 && dc == 0)))
                                is_max = false;
                            if (a <= v || d2 <= v || (b <= v && !(dr == 0 && dc == 0)))
                                is_min = false;
                        }
                    if (!is_max && !is_min) continue;

                    // iterative sub-pixel localization
                    int rr = r, cc = c, ll = layer;
                    double xr = 0, xc = 0, xs = 0, contrast = 0;
                    bool ok = false;
                    for (int step = 0; step < kMaxInterpSteps; ++step) {
                        const GrayImage& d0 = dog[ll - 1];
                        const GrayImage& d1 = dog[ll];
                        const GrayImage& d2 = dog[ll + 1];
                        double dD[3] = {(d1.at(cc + 1, rr) - d1.at(cc - 1, rr)) * 0.5,
                                        (d1.at(cc, rr + 1) - d1.at(cc, rr - 1)) * 0.5,
                                        (d2.at(cc, rr) - d0.at(cc, rr)) * 0.5};
                        double vcc = d1.at(cc, rr);
                        double dxx = d1.at(cc + 1, rr) + d1.at(cc - 1, rr) - 2 * vcc;
                        double dyy = d1.at(cc, rr + 1) + d1.at(cc, rr - 1) - 2 * vcc;
                        double dss = d2.at(cc, rr) + d0.at(cc, rr) - 2 * vcc;
                        double dxy = (d1.at(cc + 1, rr + 1) - d1.at(cc - 1, rr + 1) -
                                      d1.at(cc + 1, rr - 1) + d1.at(cc - 1, rr - 1)) * 0.25;
                        double dxs = (d2.at(cc + 1, rr) - d2.at(cc - 1, rr) -
                                      d0.at(cc + 1, rr) + d0.at(cc - 1, rr)) * 0.25;
                        double dys = (d2.at(cc, rr + 1) - d2.at(cc, rr - 1) -
                                      d0.at(cc, rr + 1) + d0.at(cc, rr - 1)) * 0.25;
                        double H[3][3] = {{dxx, dxy, dxs}, {dxy, dyy, dys}, {dxs, dys, dss}};
                        double off[3];
                        if (!solve3x3(H, dD, off)) break;
                        xc = off[0];
                        xr = off[1];
                        xs = off[2];
                        if (std::abs(xc) < 0.5 && std::abs(xr) < 0.5 && std::abs(xs) < 0.5) {
                            contrast = vcc + 0.5 * (dD[0] * xc + dD[1] * xr + dD[2] * xs);
                            ok = true;
                            break;
                        }
                        cc += static_cast<int>(std::lround(xc));
                        rr += static_cast<int>(std::lround(xr));
                        ll += static_cast<int>(std::lround(xs));
                        if (ll < 1 || ll > S || cc < kBorder || cc >= w - kBorder ||
                            rr < kBorder || rr >= h - kBorder)
                            break;
                    }
                    if (!ok) continue;
                    if (std::abs(contrast) * S < cfg.contrast_threshold) continue;

                    // edge response: principal curvature ratio of the spatial Hessian
                    {
                        const GrayImage& d1 = dog[ll];
                        double vcc = d1.at(cc, rr);
                        double dxx = d1.at(cc + 1, rr) + d1.at(cc - 1, rr) - 2 * vcc;
                        double dyy = d1.at(cc, rr + 1) + d1.at(cc, rr - 1) - 2 * vcc;
                        double dxy = (d1.at(cc + 1, rr + 1) - d1.at(cc - 1, rr + 1) -
                                      d1.at(cc + 1, rr - 1) + d1.at(cc - 1, rr - 1)) * 0.25;
                        double tr = dxx + dyy;
                        double det = dxx * dyy - dxy * dxy;
                        double er = cfg.edge_response_threshold;
                        if (det <= 0 || tr * tr * er >= (er + 1) * (er + 1) * det) continue;
                    }

                    Candidate cand;
                    cand.octave = o;
                    cand.layer = ll;
                    cand.row_octv = rr + xr;
                    cand.col_octv = cc + xc;
                    cand.x = (cc + xc) * scale_mult;
                    cand.y = (rr + xr) * scale_mult;
                    cand.scale_octv = kSigmaBase * std::pow(2.0, (ll + xs) / S);
                    cand.scale = cand.scale_octv * scale_mult;
                    candidates.push_back(cand);
                }
        }

        // orientation assignment + descriptors for this octave's candidates
        for (const Candidate& cand : candidates) {
            const GrayImage& g = gauss[cand.layer];
            std::vector<double> hist = orientation_histogram(g, cand);
            double peak = *std::max_element(hist.begin(), hist.end());
            if (peak <= 0.0) continue;
            for (int b = 0; b < kOrientationBins; ++b) {
                double l = hist[(b + kOrientationBins - 1) % kOrientationBins];
                double rgt = hist[(b + 1) % kOrientationBins];
                if (hist[b] <= l || hist[b] <= rgt ||
                    hist[b] < kOrientationPeakRatio * peak)
                    continue;
                double interp = b + 0.5 * (l - rgt) / (l - 2 * hist[b] + rgt);
                if (interp < 0) interp += kOrientationBins;
                if (interp >= kOrientationBins) interp -= kOrientationBins;
                double ori = interp * kTwoPi / kOrientationBins;

                Keypoint kp;
                kp.x = cand.x;
                kp.y = cand.y;
                kp.scale = cand.scale;
                kp.orientation = ori;
                kp.descriptor = compute_descriptor(g, cand, ori, cfg.descriptor_clamp);
                double nrm = 0.0;
                for (float dv : kp.descriptor) nrm += static_cast<double>(dv) * dv;
                if (nrm < 0.5) continue;  // flat neighborhood, no usable descriptor
                keypoints.push_back(kp);
            }
        }
        candidates.clear();

        if (o + 1 < cfg.octaves) octave_base = downsample2(gauss[S]);
    }

    std::stable_sort(keypoints.begin(), keypoints.end(),
                     [](const Keypoint& a, const Keypoint& b) {
                         if (a.scale != b.scale) return a.scale < b.scale;
                         if (a.y != b.y) return a.y < b.y;
                         if (a.x != b.x) return a.x < b.x;
                         return a.orientation < b.orientation;
                     });
    return keypoints;
}

}  // namespace facegraph
