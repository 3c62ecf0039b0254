#pragma once

#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "pg/gradcore/rng.hpp"
#include "pg/gradcore/tensor.hpp"

namespace pg::grad {

// Ordered, named parameter storage. Deque keeps references stable while
// layers are being added.
class ParamSet {
   public:
    Tensor& add(const std::string& name, Tensor t) {
        for (const auto& n : names_)
            if (n == name) throw std::invalid_argument("ParamSet: duplicate name " + name);
        t.requires_grad = true;
        names_.push_back(name);
        tensors_.push_back(std::move(t));
        return tensors_.back();
    }

    std::size_t size() const { return tensors_.size(); }
    const std::string& name(std::size_t i) const { return names_[i]; }
    Tensor& tensor(std::size_t i) { return tensors_[i]; }
    const Tensor& tensor(std::size_t i) const { return tensors_[i]; }

    Tensor* find(const std::string& name) {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return &tensors_[i];
        return nullptr;
    }

    const Tensor* find(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return &tensors_[i];
        return nullptr;
    }

    std::int64_t total_count() const {
        std::int64_t n = 0;
        for (const auto& t : tensors_) n += t.size();
        return n;
    }

   private:
    std::vector<std::string> names_;
    std::deque<Tensor> tensors_;
};

// Orthogonal init for dense weights (in,out); modified Gram-Schmidt over the
// short dimension of a seeded Gaussian matrix.
void orthogonal_init(Tensor& w, Rng& rng, double gain);

// Uniform(-b, b) with b = 1/sqrt(fan_in); used for convolution kernels.
void fanin_uniform_init(Tensor& w, Rng& rng, int fan_in);

}  // namespace pg::grad
