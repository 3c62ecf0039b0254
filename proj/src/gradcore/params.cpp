#include "pg/gradcore/params.hpp"

#include <cmath>

namespace pg::grad {

void orthogonal_init(Tensor& w, Rng& rng, double gain) {
    if (w.rank() != 2) throw std::invalid_argument("orthogonal_init: rank-2 tensor required");
    const int rows = w.dim(0), cols = w.dim(1);
    const int big = std::max(rows, cols), small = std::min(rows, cols);

    // Gaussian matrix (big x small), orthonormalize its columns.
    std::vector<double> q(static_cast<std::size_t>(big) * small);
    for (auto& v : q) v = rng.gaussian();
    for (int c = 0; c < small; ++c) {
        for (int p = 0; p < c; ++p) {
            double dot = 0.0;
            for (int r = 0; r < big; ++r)
                dot += q[static_cast<std::size_t>(r) * small + c] *
                       q[static_cast<std::size_t>(r) * small + p];
            for (int r = 0; r < big; ++r)
                q[static_cast<std::size_t>(r) * small + c] -=
                    dot * q[static_cast<std::size_t>(r) * small + p];
        }
        double norm = 0.0;
        for (int r = 0; r < big; ++r) {
            const double v = q[static_cast<std::size_t>(r) * small + c];
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-12) norm = 1.0;
        for (int r = 0; r < big; ++r) q[static_cast<std::size_t>(r) * small + c] /= norm;
    }

    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double v = rows >= cols ? q[static_cast<std::size_t>(r) * small + c]
                                          : q[static_cast<std::size_t>(c) * small + r];
            w.data[static_cast<std::size_t>(r) * cols + c] = gain * v;
        }
}

void fanin_uniform_init(Tensor& w, Rng& rng, int fan_in) {
    const double b = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (auto& v : w.data) v = rng.uniform(-b, b);
}

}  // namespace pg::grad
