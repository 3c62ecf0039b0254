#pragma once

#include <cstdint>
#include <vector>

#include "pg/gradcore/params.hpp"
#include "pg/gradcore/tensor.hpp"

namespace pg::grad {

// Adam with bias correction. Moments are kept per parameter in ParamSet order.
class AdamState {
   public:
    AdamState() = default;
    AdamState(double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
              double epsilon = 1e-8)
        : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

    // grads[i] pairs with params.tensor(i); a null or misshapen gradient is an error.
    void step(ParamSet& params, const std::vector<const Tensor*>& grads);

    std::uint64_t step_count() const { return step_count_; }
    double learning_rate() const { return lr_; }
    void set_learning_rate(double lr) { lr_ = lr; }

    // Checkpoint access.
    std::vector<Tensor>& first_moment() { return m_; }
    std::vector<Tensor>& second_moment() { return v_; }
    void set_step_count(std::uint64_t n) { step_count_ = n; }
    double beta1() const { return beta1_; }
    double beta2() const { return beta2_; }
    double epsilon() const { return eps_; }

   private:
    double lr_ = 1e-3, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    std::uint64_t step_count_ = 0;
    std::vector<Tensor> m_, v_;
};

// Global L2 norm over a gradient list; scales gradients in place when the norm
// exceeds max_norm. Returns the pre-clip norm.
double clip_grad_norm(std::vector<Tensor>& grads, double max_norm);

}  // namespace pg::grad
