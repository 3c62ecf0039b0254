#pragma once

#include <string>
#include <vector>

#include "pg/image.hpp"

namespace pg::vae {

// Binary PGM (P5, 1 channel) / PPM (P6, 3 channels), maxval 255.
void save_image(const Image& im, const std::string& path);
Image load_image(const std::string& path);

// Sorted by filename so corpus order is reproducible.
std::vector<std::string> list_corpus(const std::string& dir);

}  // namespace pg::vae
