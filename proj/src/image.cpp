#include "facegraph/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "facegraph/errors.hpp"

namespace facegraph {

namespace {

// Reads one whitespace/comment-delimited header token.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parse_positive_int(const std::string& tok, const char* what, const std::string& path) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw FormatError("malformed PGM header in '" + path + "': bad " + what);
    long v = std::stol(tok);
    if (v <= 0) throw FormatError("malformed PGM header in '" + path + "': non-positive " + what);
    return static_cast<int>(v);
}

}  // namespace

GrayImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image file '" + path + "'");

    if (next_token(in) != "P5")
        throw FormatError("malformed PGM header in '" + path + "': missing P5 magic");
    int width = parse_positive_int(next_token(in), "width", path);
    int height = parse_positive_int(next_token(in), "height", path);
    int maxval = parse_positive_int(next_token(in), "maxval", path);
    if (width > kMaxImageDimension || height > kMaxImageDimension)
        throw FormatError("image '" + path + "' exceeds maximal dimension " +
                          std::to_string(kMaxImageDimension));
    if (maxval != 255)
        throw UnsupportedError("unsupported PGM bit depth in '" + path + "': maxval " +
                               std::to_string(maxval) + " (only 8-bit maxval 255 is supported)");

    const size_t n = static_cast<size_t>(width) * height;
    std::vector<unsigned char> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n)
        throw FormatError("malformed PGM in '" + path + "': truncated pixel data");

    GrayImage img;
    img.width = width;
    img.height = height;
    img.data.resize(n);
    for (size_t i = 0; i < n; ++i) img.data[i] = raw[i] / 255.0f;
    return img;
}

void save_image(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    for (float v : img.data) {
        float c = std::clamp(v, 0.0f, 1.0f);
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(c * 255.0f))));
    }
    if (!out) throw IoError("failed writing image '" + path + "'");
}

}  // namespace facegraph
