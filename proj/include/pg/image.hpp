#pragma once

#include <cstdint>
#include <vector>

namespace pg {

// Row-major HxWxC raster with values in [0, 1].
struct Image {
    int h = 0, w = 0, c = 0;
    std::vector<double> px;

    static Image zeros(int h, int w, int c) {
        Image im;
        im.h = h;
        im.w = w;
        im.c = c;
        im.px.assign(static_cast<std::size_t>(h) * w * c, 0.0);
        return im;
    }

    double& at(int row, int col, int ch) {
        return px[(static_cast<std::size_t>(row) * w + col) * c + ch];
    }
    double at(int row, int col, int ch) const {
        return px[(static_cast<std::size_t>(row) * w + col) * c + ch];
    }
};

}  // namespace pg
