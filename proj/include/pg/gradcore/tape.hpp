#pragma once

#include <string>
#include <vector>

#include "pg/gradcore/tensor.hpp"

namespace pg::grad {

enum class Op {
    Leaf,
    Matmul,
    Add,
    AddBias,
    Sub,
    Mul,
    AffineScalar,
    Relu,
    Tanh,
    Exp,
    Log,
    Clamp,
    Minimum,
    Mean,
    Sum,
    RowSum,
    Mse,
    Conv2d,
    Upsample2x,
    Reshape,
    GaussianLogProb,
    SquashLogDet,
    KlDiagGaussian,
};

const char* op_name(Op op);

// Dynamic tape: forward ops append nodes in execution order; backward walks
// the tape in reverse, so every node is visited exactly once.
class Tape {
   public:
    struct Node {
        Op op = Op::Leaf;
        int in0 = -1, in1 = -1, in2 = -1;
        Tensor val;
        Tensor grad;
        bool needs_grad = false;
        double aux0 = 0.0, aux1 = 0.0;
        Tensor* bound = nullptr;  // external parameter this leaf mirrors
    };

    int leaf(Tensor t);                     // requires_grad taken from the tensor
    int leaf(Tensor t, bool requires_grad);
    int param(Tensor& p);                   // differentiable leaf bound to external storage

    int matmul(int a, int b);
    int add(int a, int b);
    int add_bias(int x, int bias);          // (N,M) + (M)
    int sub(int a, int b);
    int mul(int a, int b);
    int scale(int x, double c);
    int affine_scalar(int x, double a, double b);  // a*x + b
    int relu(int x);
    int tanh_(int x);
    int exp_(int x);
    int log_(int x);
    int clamp(int x, double lo, double hi);
    int minimum(int a, int b);
    int mean(int x);
    int sum(int x);
    int row_sum(int x);                     // (N,M) -> (N)
    int mse(int a, int b);
    int conv2d(int x, int w, int bias, int stride);
    int upsample2x(int x);
    int reshape(int x, std::vector<int> shape);
    int gaussian_logprob(int x, int mu, int log_std);  // elementwise
    int squash_logdet(int u);               // log|d tanh(u)/du| elementwise
    int kl_diag_gaussian(int mu, int log_std);         // scalar

    // Seeds d(loss)/d(loss) = 1 and accumulates gradients for every node with
    // needs_grad. loss must be scalar-shaped.
    void backward(int loss);

    const Tensor& value(int id) const { return nodes_[static_cast<std::size_t>(id)].val; }
    double scalar_value(int id) const;
    // Valid after backward(); zero tensor if the node is unreachable from the loss.
    const Tensor& grad(int id) const;

    // (external parameter, gradient) pairs for every param() leaf, in creation order.
    std::vector<std::pair<Tensor*, const Tensor*>> param_grads() const;

    std::size_t size() const { return nodes_.size(); }
    void clear() { nodes_.clear(); }

   private:
    int push(Node n);
    Node& at(int id) { return nodes_[static_cast<std::size_t>(id)]; }
    const Node& at(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    void ensure_grad(int id);
    static void check_same_shape(Op op, const Tensor& a, const Tensor& b);

    std::vector<Node> nodes_;
    bool ran_backward_ = false;
};

}  // namespace pg::grad
