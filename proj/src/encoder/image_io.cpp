#include "pg/encoder/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace pg::vae {

void save_image(const Image& im, const std::string& path) {
    if (im.c != 1 && im.c != 3)
        throw std::invalid_argument("save_image: only 1 or 3 channels supported");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_image: cannot open " + path);
    f << (im.c == 1 ? "P5" : "P6") << "\n" << im.w << " " << im.h << "\n255\n";
    std::vector<unsigned char> bytes;
    bytes.reserve(im.px.size());
    for (double v : im.px) {
        const double q = std::clamp(v, 0.0, 1.0) * 255.0;
        bytes.push_back(static_cast<unsigned char>(std::lround(q)));
    }
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Image load_image(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_image: cannot open " + path);
    std::string magic;
    f >> magic;
    if (magic != "P5" && magic != "P6")
        throw std::runtime_error("load_image: " + path + " is not a binary PGM/PPM");
    int w = 0, h = 0, maxval = 0;
    f >> w >> h >> maxval;
    if (maxval != 255) throw std::runtime_error("load_image: expected maxval 255 in " + path);
    f.get();  // single whitespace after the header
    const int c = magic == "P5" ? 1 : 3;
    Image im = Image::zeros(h, w, c);
    std::vector<unsigned char> bytes(im.px.size());
    f.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("load_image: truncated file " + path);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        im.px[i] = static_cast<double>(bytes[i]) / 255.0;
    return im;
}

std::vector<std::string> list_corpus(const std::string& dir) {
    std::vector<std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm") out.push_back(entry.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace pg::vae
