#include "facegraph/landmarks.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "facegraph/errors.hpp"

namespace facegraph {

const char* region_name(Region r) {
    switch (r) {
        case Region::LeftEye: return "left_eye";
        case Region::RightEye: return "right_eye";
        case Region::Nose: return "nose";
        case Region::Mouth: return "mouth";
    }
    return "?";
}

LandmarkSet load_landmarks(const std::string& path, int image_width, int image_height) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open landmark file '" + path + "'");

    LandmarkSet lm;
    std::array<bool, kRegionCount> seen{};
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string name;
        double x, y;
        if (!(ss >> name >> x >> y))
            throw FormatError("malformed landmark line " + std::to_string(lineno) + " in '" +
                              path + "'");
        int idx = -1;
        for (int i = 0; i < kRegionCount; ++i)
            if (name == region_name(static_cast<Region>(i))) idx = i;
        if (idx < 0)
            throw FormatError("unknown region '" + name + "' at line " + std::to_string(lineno) +
                              " in '" + path + "'");
        if (seen[idx])
            throw FormatError("duplicate region '" + name + "' in '" + path + "'");
        if (x < 0 || x >= image_width || y < 0 || y >= image_height)
            throw FormatError("landmark '" + name + "' at (" + std::to_string(x) + "," +
                              std::to_string(y) + ") lies outside the " +
                              std::to_string(image_width) + "x" + std::to_string(image_height) +
                              " image in '" + path + "'");
        seen[idx] = true;
        lm.centers[idx] = {x, y};
    }
    for (int i = 0; i < kRegionCount; ++i)
        if (!seen[i])
            throw FormatError("missing region '" + std::string(region_name(static_cast<Region>(i))) +
                              "' in '" + path + "'");

    for (int i = 0; i < kRegionCount; ++i)
        for (int j = i + 1; j < kRegionCount; ++j)
            if (lm.centers[i].x == lm.centers[j].x && lm.centers[i].y == lm.centers[j].y)
                throw FormatError("landmarks '" + std::string(region_name(static_cast<Region>(i))) +
                                  "' and '" + std::string(region_name(static_cast<Region>(j))) +
                                  "' coincide in '" + path + "'");
    return lm;
}

RegionGroups group_keypoints(const std::vector<Keypoint>& points, const LandmarkSet& lm,
                             double radius) {
    if (radius <= 0) throw Error("ROI radius must be positive");
    RegionGroups out;
    out.roi_radius = radius;
    const double r2 = radius * radius;
    for (const Keypoint& k : points) {
        int best = -1;
        double best_d2 = 0.0;
        for (int i = 0; i < kRegionCount; ++i) {
            double dx = k.x - lm.centers[i].x;
            double dy = k.y - lm.centers[i].y;
            double d2 = dx * dx + dy * dy;
            if (d2 > r2) continue;
            if (best < 0 || d2 < best_d2) {  // strict: ties keep the earlier region
                best = i;
                best_d2 = d2;
            }
        }
        if (best >= 0) out.groups[best].push_back(k);
    }
    return out;
}

double default_roi_radius(int image_height) { return 0.18 * image_height; }

}  // namespace facegraph
