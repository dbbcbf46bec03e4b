#include "facegraph/keypoint.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "facegraph/errors.hpp"

namespace facegraph {

namespace {

double dot128(const float* a, const float* b) {
    double s = 0.0;
    for (size_t i = 0; i < kDescriptorSize; ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
}

}  // namespace

double descriptor_similarity(const Keypoint& a, const Keypoint& b) {
    return std::clamp(dot128(a.descriptor.data(), b.descriptor.data()), 0.0, 1.0);
}

double descriptor_similarity(const std::vector<float>& a, const std::vector<float>& b) {
    if (a.size() != kDescriptorSize || b.size() != kDescriptorSize)
        throw Error("descriptor length mismatch: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + " (expected 128)");
    return std::clamp(dot128(a.data(), b.data()), 0.0, 1.0);
}

void save_keypoints(const std::vector<Keypoint>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "x,y,scale,orientation";
    for (size_t i = 0; i < kDescriptorSize; ++i) out << ",d" << i;
    out << "\n";
    char buf[32];
    for (const Keypoint& k : points) {
        std::snprintf(buf, sizeof(buf), "%.9g", k.x);
        out << buf;
        std::snprintf(buf, sizeof(buf), ",%.9g", k.y);
        out << buf;
        std::snprintf(buf, sizeof(buf), ",%.9g", k.scale);
        out << buf;
        std::snprintf(buf, sizeof(buf), ",%.9g", k.orientation);
        out << buf;
        for (float d : k.descriptor) {
            std::snprintf(buf, sizeof(buf), ",%.9g", static_cast<double>(d));
            out << buf;
        }
        out << "\n";
    }
    if (!out) throw IoError("failed writing keypoints to '" + path + "'");
}

std::vector<Keypoint> load_keypoints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open keypoint file '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        throw FormatError("keypoint file '" + path + "' is empty (missing header)");

    std::vector<Keypoint> points;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> fields;
        fields.reserve(4 + kDescriptorSize);
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc() || ptr != end)
                throw FormatError("non-numeric field '" + cell + "' at line " +
                                  std::to_string(lineno) + " of '" + path + "'");
            fields.push_back(v);
        }
        if (fields.size() != 4 + kDescriptorSize)
            throw FormatError("wrong column count (" + std::to_string(fields.size()) +
                              ", expected 132) at line " + std::to_string(lineno) + " of '" +
                              path + "'");
        Keypoint k;
        k.x = fields[0];
        k.y = fields[1];
        k.scale = fields[2];
        k.orientation = fields[3];
        for (size_t i = 0; i < kDescriptorSize; ++i)
            k.descriptor[i] = static_cast<float>(fields[4 + i]);
        points.push_back(k);
    }
    return points;
}

}  // namespace facegraph
