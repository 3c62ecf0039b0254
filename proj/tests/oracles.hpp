#pragma once

// Test-only oracles, independent of the library's differentiation and
// geometry paths: finite differences, Monte-Carlo KL, brute-force polygon
// rasterization, and a recursive advantage recursion.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "pg/gradcore/rng.hpp"
#include "pg/gradcore/tape.hpp"
#include "pg/gradcore/tensor.hpp"
#include "pg/shapes/polygon.hpp"

namespace oracle {

struct FdReport {
    double max_rel = 0.0;
    std::int64_t checked = 0;
};

// Central finite differences on every entry of every input tensor against the
// tape's analytic gradient. build() must construct a scalar loss from fresh
// leaves on the given tape.
inline FdReport fd_check(
    std::vector<pg::grad::Tensor> inputs,
    const std::function<int(pg::grad::Tape&, const std::vector<int>&)>& build,
    double h = 1e-5) {
    using pg::grad::Tape;
    using pg::grad::Tensor;

    auto eval = [&](const std::vector<Tensor>& ins) {
        Tape tape;
        std::vector<int> ids;
        ids.reserve(ins.size());
        for (const auto& t : ins) ids.push_back(tape.leaf(t, false));
        return tape.scalar_value(build(tape, ids));
    };

    Tape tape;
    std::vector<int> ids;
    for (auto& t : inputs) {
        t.requires_grad = true;
        ids.push_back(tape.leaf(t, true));
    }
    const int loss = build(tape, ids);
    tape.backward(loss);
    std::vector<Tensor> analytic;
    analytic.reserve(ids.size());
    for (int id : ids) analytic.push_back(tape.grad(id));

    FdReport rep;
    for (std::size_t ti = 0; ti < inputs.size(); ++ti) {
        for (std::int64_t j = 0; j < inputs[ti].size(); ++j) {
            std::vector<Tensor> plus = inputs, minus = inputs;
            plus[ti].data[j] += h;
            minus[ti].data[j] -= h;
            const double fd = (eval(plus) - eval(minus)) / (2.0 * h);
            const double an = analytic[ti].data[j];
            const double denom = std::max({std::fabs(fd), std::fabs(an), 1e-6});
            rep.max_rel = std::max(rep.max_rel, std::fabs(fd - an) / denom);
            ++rep.checked;
        }
    }
    return rep;
}

// Monte-Carlo estimate of KL(N(mu, sigma^2) || N(0, 1)).
inline double mc_kl_diag_gaussian(const std::vector<double>& mu, const std::vector<double>& sigma,
                                  std::int64_t samples, std::uint64_t seed) {
    pg::grad::Rng rng(seed);
    const double half_log_2pi = 0.9189385332046727;
    double acc = 0.0;
    for (std::int64_t s = 0; s < samples; ++s) {
        double term = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double eps = rng.gaussian();
            const double z = mu[i] + sigma[i] * eps;
            const double logq = -0.5 * eps * eps - std::log(sigma[i]) - half_log_2pi;
            const double logp = -0.5 * z * z - half_log_2pi;
            term += logq - logp;
        }
        acc += term;
    }
    return acc / static_cast<double>(samples);
}

// ---------------------------------------------------------------------------
// Scanline rasterization oracles for polygon geometry. These re-derive
// coverage row by row instead of using the library's point or slice tests.

inline std::vector<std::pair<double, double>> raster_row_spans(
    const pg::shapes::Polygon& poly, double y) {
    std::vector<double> xs;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        if ((a.y <= y && b.y > y) || (b.y <= y && a.y > y))
            xs.push_back(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
    }
    std::sort(xs.begin(), xs.end());
    std::vector<std::pair<double, double>> spans;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) spans.emplace_back(xs[i], xs[i + 1]);
    return spans;
}

struct RasterStats {
    double area = 0.0;
    double cx = 0.0, cy = 0.0;
    double min_y = std::numeric_limits<double>::infinity();
    std::int64_t cells = 0;
};

inline RasterStats rasterize(const pg::shapes::Polygon& poly, double cell) {
    double xmin = poly[0].x, xmax = poly[0].x, ymin = poly[0].y, ymax = poly[0].y;
    for (const auto& v : poly) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    RasterStats st;
    for (double y = ymin + cell / 2; y <= ymax; y += cell) {
        for (const auto& [lo, hi] : raster_row_spans(poly, y)) {
            for (double x = xmin + cell / 2; x <= xmax; x += cell) {
                if (x < lo || x > hi) continue;
                ++st.cells;
                st.cx += x;
                st.cy += y;
                st.min_y = std::min(st.min_y, y);
            }
        }
    }
    if (st.cells > 0) {
        st.cx /= static_cast<double>(st.cells);
        st.cy /= static_cast<double>(st.cells);
        st.area = static_cast<double>(st.cells) * cell * cell;
    }
    return st;
}

// Overhang depth past the table edge (edge_y) from a 1 mm rasterization.
inline double raster_overhang(const pg::shapes::Polygon& world_poly, double edge_y,
                              double cell = 1e-3) {
    const RasterStats st = rasterize(world_poly, cell);
    if (st.cells == 0) return 0.0;
    return std::max(0.0, edge_y - st.min_y);
}

// Largest inscribed circle from candidate centers on a coarse grid against
// densely sampled boundary points.
inline double raster_incircle_diameter(const pg::shapes::Polygon& poly, double cell = 1e-3) {
    std::vector<pg::shapes::Vec2> boundary;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = poly[i];
        const auto b = poly[(i + 1) % n];
        const double len = (b - a).norm();
        const int steps = std::max(1, static_cast<int>(len / cell));
        for (int s = 0; s < steps; ++s)
            boundary.push_back(a + (b - a) * (static_cast<double>(s) / steps));
    }
    double xmin = poly[0].x, xmax = poly[0].x, ymin = poly[0].y, ymax = poly[0].y;
    for (const auto& v : poly) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    double best = 0.0;
    for (double y = ymin + cell / 2; y <= ymax; y += cell) {
        const auto spans = raster_row_spans(poly, y);
        for (double x = xmin + cell / 2; x <= xmax; x += cell) {
            bool inside = false;
            for (const auto& [lo, hi] : spans)
                if (x >= lo && x <= hi) inside = true;
            if (!inside) continue;
            double r2 = std::numeric_limits<double>::infinity();
            for (const auto& bp : boundary) {
                const double dx = bp.x - x, dy = bp.y - y;
                r2 = std::min(r2, dx * dx + dy * dy);
            }
            best = std::max(best, std::sqrt(r2));
        }
    }
    return 2.0 * best;
}

}  // namespace oracle
