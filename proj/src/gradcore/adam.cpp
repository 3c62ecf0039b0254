#include "pg/gradcore/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace pg::grad {

void AdamState::step(ParamSet& params, const std::vector<const Tensor*>& grads) {
    if (grads.size() != params.size())
        throw std::invalid_argument("adam: gradient list size " + std::to_string(grads.size()) +
                                    " does not match parameter count " +
                                    std::to_string(params.size()));
    if (m_.empty()) {
        m_.reserve(params.size());
        v_.reserve(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_.push_back(Tensor::zeros(params.tensor(i).shape));
            v_.push_back(Tensor::zeros(params.tensor(i).shape));
        }
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!grads[i]) throw std::invalid_argument("adam: missing gradient for " + params.name(i));
        if (!grads[i]->same_shape(params.tensor(i)))
            throw std::invalid_argument("adam: gradient shape mismatch for " + params.name(i));
    }
    ++step_count_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_count_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_count_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = params.tensor(i);
        Tensor& m = m_[i];
        Tensor& v = v_[i];
        const Tensor& g = *grads[i];
        for (std::int64_t j = 0; j < p.size(); ++j) {
            m.data[j] = beta1_ * m.data[j] + (1.0 - beta1_) * g.data[j];
            v.data[j] = beta2_ * v.data[j] + (1.0 - beta2_) * g.data[j] * g.data[j];
            const double mhat = m.data[j] / bc1;
            const double vhat = v.data[j] / bc2;
            p.data[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

double clip_grad_norm(std::vector<Tensor>& grads, double max_norm) {
    double sq = 0.0;
    for (const auto& g : grads)
        for (double v : g.data) sq += v * v;
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double s = max_norm / norm;
        for (auto& g : grads)
            for (auto& v : g.data) v *= s;
    }
    return norm;
}

}  // namespace pg::grad
