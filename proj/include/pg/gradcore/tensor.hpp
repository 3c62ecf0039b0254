#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pg::grad {

// Dense row-major 64-bit float tensor. Shapes are small (rank <= 4).
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;
    bool requires_grad = false;

    Tensor() = default;

    static Tensor zeros(std::vector<int> shape) {
        Tensor t;
        t.shape = std::move(shape);
        t.data.assign(numel(t.shape), 0.0);
        return t;
    }

    static Tensor full(std::vector<int> shape, double v) {
        Tensor t = zeros(std::move(shape));
        std::fill(t.data.begin(), t.data.end(), v);
        return t;
    }

    static Tensor scalar(double v) {
        Tensor t;
        t.shape = {1};
        t.data = {v};
        return t;
    }

    static Tensor from(std::vector<int> shape, std::vector<double> values) {
        Tensor t;
        t.shape = std::move(shape);
        t.data = std::move(values);
        if (static_cast<std::int64_t>(t.data.size()) != numel(t.shape))
            throw std::invalid_argument("Tensor::from: data length does not match shape");
        return t;
    }

    static std::int64_t numel(const std::vector<int>& shape) {
        std::int64_t n = 1;
        for (int d : shape) {
            if (d < 0) throw std::invalid_argument("Tensor: negative dimension");
            n *= d;
        }
        return n;
    }

    std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
    int rank() const { return static_cast<int>(shape.size()); }
    int dim(int i) const { return shape.at(static_cast<std::size_t>(i)); }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    double& at(std::int64_t i) { return data[static_cast<std::size_t>(i)]; }
    double at(std::int64_t i) const { return data[static_cast<std::size_t>(i)]; }
};

inline std::string shape_str(const std::vector<int>& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    out += ")";
    return out;
}

}  // namespace pg::grad
