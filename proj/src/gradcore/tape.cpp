#include "pg/gradcore/tape.hpp"

#include <cmath>
#include <stdexcept>

#include "pg/gradcore/kernels.hpp"

namespace pg::grad {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727417803297;  // 0.5*log(2*pi)
constexpr double kLog2 = 0.6931471805599453094172321;

double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

[[noreturn]] void shape_error(Op op, const std::string& detail) {
    throw std::invalid_argument(std::string("gradcore: ") + op_name(op) + ": " + detail);
}

}  // namespace

const char* op_name(Op op) {
    switch (op) {
        case Op::Leaf: return "leaf";
        case Op::Matmul: return "matmul";
        case Op::Add: return "add";
        case Op::AddBias: return "add_bias";
        case Op::Sub: return "sub";
        case Op::Mul: return "mul";
        case Op::AffineScalar: return "affine_scalar";
        case Op::Relu: return "relu";
        case Op::Tanh: return "tanh";
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Clamp: return "clamp";
        case Op::Minimum: return "minimum";
        case Op::Mean: return "mean";
        case Op::Sum: return "sum";
        case Op::RowSum: return "row_sum";
        case Op::Mse: return "mse";
        case Op::Conv2d: return "conv2d";
        case Op::Upsample2x: return "upsample2x";
        case Op::Reshape: return "reshape";
        case Op::GaussianLogProb: return "gaussian_logprob";
        case Op::SquashLogDet: return "squash_logdet";
        case Op::KlDiagGaussian: return "kl_diag_gaussian";
    }
    return "?";
}

void Tape::check_same_shape(Op op, const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b))
        shape_error(op, "shape mismatch " + shape_str(a.shape) + " vs " + shape_str(b.shape));
}

int Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(Tensor t) {
    const bool rg = t.requires_grad;
    return leaf(std::move(t), rg);
}

int Tape::leaf(Tensor t, bool requires_grad) {
    Node n;
    n.op = Op::Leaf;
    n.val = std::move(t);
    n.needs_grad = requires_grad;
    return push(std::move(n));
}

int Tape::param(Tensor& p) {
    Node n;
    n.op = Op::Leaf;
    n.val = p;
    n.needs_grad = true;
    n.bound = &p;
    return push(std::move(n));
}

int Tape::matmul(int a, int b) {
    const Tensor& A = at(a).val;
    const Tensor& B = at(b).val;
    if (A.rank() != 2 || B.rank() != 2 || A.dim(1) != B.dim(0))
        shape_error(Op::Matmul,
                    "requires (n,k)x(k,m), got " + shape_str(A.shape) + " x " + shape_str(B.shape));
    Node n;
    n.op = Op::Matmul;
    n.in0 = a;
    n.in1 = b;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = Tensor::zeros({A.dim(0), B.dim(1)});
    kern::mm_nn(A.data.data(), B.data.data(), n.val.data.data(), A.dim(0), A.dim(1), B.dim(1),
                false);
    return push(std::move(n));
}

int Tape::add(int a, int b) {
    const Tensor& A = at(a).val;
    const Tensor& B = at(b).val;
    check_same_shape(Op::Add, A, B);
    Node n;
    n.op = Op::Add;
    n.in0 = a;
    n.in1 = b;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = A;
    for (std::int64_t i = 0; i < n.val.size(); ++i) n.val.data[i] += B.data[i];
    return push(std::move(n));
}

int Tape::add_bias(int x, int bias) {
    const Tensor& X = at(x).val;
    const Tensor& B = at(bias).val;
    if (X.rank() != 2 || B.rank() != 1 || B.dim(0) != X.dim(1))
        shape_error(Op::AddBias,
                    "requires (N,M)+(M), got " + shape_str(X.shape) + " + " + shape_str(B.shape));
    Node n;
    n.op = Op::AddBias;
    n.in0 = x;
    n.in1 = bias;
    n.needs_grad = at(x).needs_grad || at(bias).needs_grad;
    n.val = X;
    const int N = X.dim(0), M = X.dim(1);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < M; ++j) n.val.data[static_cast<std::int64_t>(i) * M + j] += B.data[j];
    return push(std::move(n));
}

int Tape::sub(int a, int b) {
    const Tensor& A = at(a).val;
    const Tensor& B = at(b).val;
    check_same_shape(Op::Sub, A, B);
    Node n;
    n.op = Op::Sub;
    n.in0 = a;
    n.in1 = b;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = A;
    for (std::int64_t i = 0; i < n.val.size(); ++i) n.val.data[i] -= B.data[i];
    return push(std::move(n));
}

int Tape::mul(int a, int b) {
    const Tensor& A = at(a).val;
    const Tensor& B = at(b).val;
    check_same_shape(Op::Mul, A, B);
    Node n;
    n.op = Op::Mul;
    n.in0 = a;
    n.in1 = b;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = A;
    for (std::int64_t i = 0; i < n.val.size(); ++i) n.val.data[i] *= B.data[i];
    return push(std::move(n));
}

int Tape::scale(int x, double c) { return affine_scalar(x, c, 0.0); }

int Tape::affine_scalar(int x, double a, double b) {
    Node n;
    n.op = Op::AffineScalar;
    n.in0 = x;
    n.aux0 = a;
    n.aux1 = b;
    n.needs_grad = at(x).needs_grad;
    n.val = at(x).val;
    for (auto& v : n.val.data) v = a * v + b;
    return push(std::move(n));
}

int Tape::relu(int x) {
    Node n;
    n.op = Op::Relu;
    n.in0 = x;
    n.needs_grad = at(x).needs_grad;
    n.val = at(x).val;
    for (auto& v : n.val.data)
        if (v < 0.0) v = 0.0;
    return push(std::move(n));
}

int Tape::tanh_(int x) {
    Node n;
    n.op = Op::Tanh;
    n.in0 = x;
    n.needs_grad = at(x).needs_grad;
    n.val = at(x).val;
    for (auto& v : n.val.data) v = std::tanh(v);
    return push(std::move(n));
}

int Tape::exp_(int x) {
    Node n;
    n.op = Op::Exp;
    n.in0 = x;
    n.needs_grad = at(x).needs_grad;
    n.val = at(x).val;
    for (auto& v : n.val.data) v = std::exp(v);
    return push(std::move(n));
}

int Tape::log_(int x) {
    Node n;
    n.op = Op::Log;
    n.in0 = x;
    n.needs_grad = at(x).needs_grad;
    n.val = at(x).val;
    for (auto& v : n.val.data) v = std::log(v);
    return push(std::move(n));
}

int Tape::clamp(int x, double lo, double hi) {
    Node n;
    n.op = Op::Clamp;
    n.in0 = x;
    n.aux0 = lo;
    n.aux1 = hi;
    n.needs_grad = at(x).needs_grad;
    n.val = at(x).val;
    for (auto& v : n.val.data) v = v < lo ? lo : (v > hi ? hi : v);
    return push(std::move(n));
}

int Tape::minimum(int a, int b) {
    const Tensor& A = at(a).val;
    const Tensor& B = at(b).val;
    check_same_shape(Op::Minimum, A, B);
    Node n;
    n.op = Op::Minimum;
    n.in0 = a;
    n.in1 = b;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = A;
    for (std::int64_t i = 0; i < n.val.size(); ++i)
        if (B.data[i] < n.val.data[i]) n.val.data[i] = B.data[i];
    return push(std::move(n));
}

int Tape::mean(int x) {
    Node n;
    n.op = Op::Mean;
    n.in0 = x;
    n.needs_grad = at(x).needs_grad;
    double acc = 0.0;
    for (double v : at(x).val.data) acc += v;
    n.val = Tensor::scalar(acc / static_cast<double>(at(x).val.size()));
    return push(std::move(n));
}

int Tape::sum(int x) {
    Node n;
    n.op = Op::Sum;
    n.in0 = x;
    n.needs_grad = at(x).needs_grad;
    double acc = 0.0;
    for (double v : at(x).val.data) acc += v;
    n.val = Tensor::scalar(acc);
    return push(std::move(n));
}

int Tape::row_sum(int x) {
    const Tensor& X = at(x).val;
    if (X.rank() != 2) shape_error(Op::RowSum, "requires rank-2 input, got " + shape_str(X.shape));
    Node n;
    n.op = Op::RowSum;
    n.in0 = x;
    n.needs_grad = at(x).needs_grad;
    const int N = X.dim(0), M = X.dim(1);
    n.val = Tensor::zeros({N});
    for (int i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int j = 0; j < M; ++j) acc += X.data[static_cast<std::int64_t>(i) * M + j];
        n.val.data[i] = acc;
    }
    return push(std::move(n));
}

int Tape::mse(int a, int b) {
    const Tensor& A = at(a).val;
    const Tensor& B = at(b).val;
    check_same_shape(Op::Mse, A, B);
    Node n;
    n.op = Op::Mse;
    n.in0 = a;
    n.in1 = b;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    double acc = 0.0;
    for (std::int64_t i = 0; i < A.size(); ++i) {
        const double d = A.data[i] - B.data[i];
        acc += d * d;
    }
    n.val = Tensor::scalar(acc / static_cast<double>(A.size()));
    return push(std::move(n));
}

int Tape::conv2d(int x, int w, int bias, int stride) {
    const Tensor& X = at(x).val;
    const Tensor& W = at(w).val;
    if (stride != 1 && stride != 2)
        shape_error(Op::Conv2d, "stride must be 1 or 2, got " + std::to_string(stride));
    if (X.rank() != 4 || W.rank() != 4 || W.dim(2) != 3 || W.dim(3) != 3 ||
        W.dim(1) != X.dim(1))
        shape_error(Op::Conv2d, "requires x(N,Ci,H,W), w(Co,Ci,3,3), got " + shape_str(X.shape) +
                                    " and " + shape_str(W.shape));
    const Tensor* B = bias >= 0 ? &at(bias).val : nullptr;
    if (B && (B->rank() != 1 || B->dim(0) != W.dim(0)))
        shape_error(Op::Conv2d, "bias must be (Co), got " + shape_str(B->shape));
    Node n;
    n.op = Op::Conv2d;
    n.in0 = x;
    n.in1 = w;
    n.in2 = bias;
    n.aux0 = stride;
    n.needs_grad = at(x).needs_grad || at(w).needs_grad || (bias >= 0 && at(bias).needs_grad);
    const int N = X.dim(0), Ci = X.dim(1), H = X.dim(2), Wd = X.dim(3), Co = W.dim(0);
    n.val = Tensor::zeros({N, Co, kern::conv_out_dim(H, stride), kern::conv_out_dim(Wd, stride)});
    kern::conv2d_fwd(X.data.data(), W.data.data(), B ? B->data.data() : nullptr,
                     n.val.data.data(), N, Ci, H, Wd, Co, stride);
    return push(std::move(n));
}

int Tape::upsample2x(int x) {
    const Tensor& X = at(x).val;
    if (X.rank() != 4)
        shape_error(Op::Upsample2x, "requires rank-4 input, got " + shape_str(X.shape));
    Node n;
    n.op = Op::Upsample2x;
    n.in0 = x;
    n.needs_grad = at(x).needs_grad;
    n.val = Tensor::zeros({X.dim(0), X.dim(1), 2 * X.dim(2), 2 * X.dim(3)});
    kern::upsample2x_fwd(X.data.data(), n.val.data.data(), X.dim(0), X.dim(1), X.dim(2),
                         X.dim(3));
    return push(std::move(n));
}

int Tape::reshape(int x, std::vector<int> shape) {
    const Tensor& X = at(x).val;
    if (Tensor::numel(shape) != X.size())
        shape_error(Op::Reshape,
                    "cannot reshape " + shape_str(X.shape) + " to " + shape_str(shape));
    Node n;
    n.op = Op::Reshape;
    n.in0 = x;
    n.needs_grad = at(x).needs_grad;
    n.val = X;
    n.val.shape = std::move(shape);
    return push(std::move(n));
}

int Tape::gaussian_logprob(int x, int mu, int log_std) {
    const Tensor& X = at(x).val;
    const Tensor& M = at(mu).val;
    const Tensor& T = at(log_std).val;
    check_same_shape(Op::GaussianLogProb, X, M);
    const bool bcast = !T.same_shape(X);
    if (bcast && !(X.rank() == 2 && T.rank() == 1 && T.dim(0) == X.dim(1)))
        shape_error(Op::GaussianLogProb, "log_std must match x or broadcast (M) over (N,M), got " +
                                             shape_str(T.shape) + " vs " + shape_str(X.shape));
    Node n;
    n.op = Op::GaussianLogProb;
    n.in0 = x;
    n.in1 = mu;
    n.in2 = log_std;
    n.needs_grad = at(x).needs_grad || at(mu).needs_grad || at(log_std).needs_grad;
    n.val = Tensor::zeros(X.shape);
    const int cols = bcast ? X.dim(1) : 0;
    for (std::int64_t i = 0; i < X.size(); ++i) {
        const double t = bcast ? T.data[i % cols] : T.data[i];
        const double z = (X.data[i] - M.data[i]) * std::exp(-t);
        n.val.data[i] = -0.5 * z * z - t - kHalfLog2Pi;
    }
    return push(std::move(n));
}

int Tape::squash_logdet(int u) {
    Node n;
    n.op = Op::SquashLogDet;
    n.in0 = u;
    n.needs_grad = at(u).needs_grad;
    n.val = at(u).val;
    for (auto& v : n.val.data) v = 2.0 * (kLog2 - v - softplus(-2.0 * v));
    return push(std::move(n));
}

int Tape::kl_diag_gaussian(int mu, int log_std) {
    const Tensor& M = at(mu).val;
    const Tensor& T = at(log_std).val;
    check_same_shape(Op::KlDiagGaussian, M, T);
    Node n;
    n.op = Op::KlDiagGaussian;
    n.in0 = mu;
    n.in1 = log_std;
    n.needs_grad = at(mu).needs_grad || at(log_std).needs_grad;
    double acc = 0.0;
    for (std::int64_t i = 0; i < M.size(); ++i) {
        const double s2 = std::exp(2.0 * T.data[i]);
        acc += 0.5 * (M.data[i] * M.data[i] + s2 - 1.0 - 2.0 * T.data[i]);
    }
    n.val = Tensor::scalar(acc);
    return push(std::move(n));
}

double Tape::scalar_value(int id) const {
    const Tensor& v = at(id).val;
    if (v.size() != 1) throw std::invalid_argument("gradcore: node is not scalar");
    return v.data[0];
}

void Tape::ensure_grad(int id) {
    Node& n = at(id);
    if (n.grad.data.empty()) n.grad = Tensor::zeros(n.val.shape);
}

const Tensor& Tape::grad(int id) const {
    const Node& n = at(id);
    if (n.grad.data.empty()) {
        static thread_local Tensor zero;
        zero = Tensor::zeros(n.val.shape);
        return zero;
    }
    return n.grad;
}

std::vector<std::pair<Tensor*, const Tensor*>> Tape::param_grads() const {
    std::vector<std::pair<Tensor*, const Tensor*>> out;
    for (const Node& n : nodes_)
        if (n.bound) out.emplace_back(n.bound, n.grad.data.empty() ? nullptr : &n.grad);
    return out;
}

void Tape::backward(int loss) {
    if (at(loss).val.size() != 1)
        throw std::invalid_argument("gradcore: backward requires a scalar loss, got shape " +
                                    shape_str(at(loss).val.shape));
    // Pre-allocate zero gradients for every differentiable node so that
    // leaves untouched by the loss still report zeros.
    for (int id = 0; id < static_cast<int>(nodes_.size()); ++id)
        if (at(id).needs_grad) ensure_grad(id);
    ensure_grad(loss);
    at(loss).grad.data[0] = 1.0;

    for (int id = static_cast<int>(nodes_.size()) - 1; id >= 0; --id) {
        Node& n = at(id);
        if (!n.needs_grad || n.grad.data.empty()) continue;
        const Tensor& g = n.grad;
        auto want = [&](int in) { return in >= 0 && at(in).needs_grad; };
        auto gbuf = [&](int in) -> Tensor& {
            ensure_grad(in);
            return at(in).grad;
        };
        switch (n.op) {
            case Op::Leaf:
                break;
            case Op::Matmul: {
                const Tensor& A = at(n.in0).val;
                const Tensor& B = at(n.in1).val;
                const int N = A.dim(0), K = A.dim(1), M = B.dim(1);
                if (want(n.in0))
                    kern::mm_nt(g.data.data(), B.data.data(), gbuf(n.in0).data.data(), N, M, K);
                if (want(n.in1))
                    kern::mm_tn(A.data.data(), g.data.data(), gbuf(n.in1).data.data(), N, K, M);
                break;
            }
            case Op::Add:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    for (std::int64_t i = 0; i < g.size(); ++i) d.data[i] += g.data[i];
                }
                if (want(n.in1)) {
                    Tensor& d = gbuf(n.in1);
                    for (std::int64_t i = 0; i < g.size(); ++i) d.data[i] += g.data[i];
                }
                break;
            case Op::AddBias: {
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    for (std::int64_t i = 0; i < g.size(); ++i) d.data[i] += g.data[i];
                }
                if (want(n.in1)) {
                    Tensor& d = gbuf(n.in1);
                    const int N = n.val.dim(0), M = n.val.dim(1);
                    for (int i = 0; i < N; ++i)
                        for (int j = 0; j < M; ++j)
                            d.data[j] += g.data[static_cast<std::int64_t>(i) * M + j];
                }
                break;
            }
            case Op::Sub:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    for (std::int64_t i = 0; i < g.size(); ++i) d.data[i] += g.data[i];
                }
                if (want(n.in1)) {
                    Tensor& d = gbuf(n.in1);
                    for (std::int64_t i = 0; i < g.size(); ++i) d.data[i] -= g.data[i];
                }
                break;
            case Op::Mul:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    const Tensor& B = at(n.in1).val;
                    for (std::int64_t i = 0; i < g.size(); ++i) d.data[i] += g.data[i] * B.data[i];
                }
                if (want(n.in1)) {
                    Tensor& d = gbuf(n.in1);
                    const Tensor& A = at(n.in0).val;
                    for (std::int64_t i = 0; i < g.size(); ++i) d.data[i] += g.data[i] * A.data[i];
                }
                break;
            case Op::AffineScalar:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    for (std::int64_t i = 0; i < g.size(); ++i) d.data[i] += n.aux0 * g.data[i];
                }
                break;
            case Op::Relu:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    const Tensor& X = at(n.in0).val;
                    for (std::int64_t i = 0; i < g.size(); ++i)
                        if (X.data[i] > 0.0) d.data[i] += g.data[i];
                }
                break;
            case Op::Tanh:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    for (std::int64_t i = 0; i < g.size(); ++i)
                        d.data[i] += g.data[i] * (1.0 - n.val.data[i] * n.val.data[i]);
                }
                break;
            case Op::Exp:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    for (std::int64_t i = 0; i < g.size(); ++i)
                        d.data[i] += g.data[i] * n.val.data[i];
                }
                break;
            case Op::Log:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    const Tensor& X = at(n.in0).val;
                    for (std::int64_t i = 0; i < g.size(); ++i) d.data[i] += g.data[i] / X.data[i];
                }
                break;
            case Op::Clamp:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    const Tensor& X = at(n.in0).val;
                    for (std::int64_t i = 0; i < g.size(); ++i)
                        if (X.data[i] >= n.aux0 && X.data[i] <= n.aux1) d.data[i] += g.data[i];
                }
                break;
            case Op::Minimum: {
                const Tensor& A = at(n.in0).val;
                const Tensor& B = at(n.in1).val;
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    for (std::int64_t i = 0; i < g.size(); ++i)
                        if (A.data[i] <= B.data[i]) d.data[i] += g.data[i];
                }
                if (want(n.in1)) {
                    Tensor& d = gbuf(n.in1);
                    for (std::int64_t i = 0; i < g.size(); ++i)
                        if (B.data[i] < A.data[i]) d.data[i] += g.data[i];
                }
                break;
            }
            case Op::Mean:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    const double gv = g.data[0] / static_cast<double>(d.size());
                    for (auto& v : d.data) v += gv;
                }
                break;
            case Op::Sum:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    const double gv = g.data[0];
                    for (auto& v : d.data) v += gv;
                }
                break;
            case Op::RowSum:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    const int N = d.dim(0), M = d.dim(1);
                    for (int i = 0; i < N; ++i)
                        for (int j = 0; j < M; ++j)
                            d.data[static_cast<std::int64_t>(i) * M + j] += g.data[i];
                }
                break;
            case Op::Mse: {
                const Tensor& A = at(n.in0).val;
                const Tensor& B = at(n.in1).val;
                const double c = 2.0 * g.data[0] / static_cast<double>(A.size());
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    for (std::int64_t i = 0; i < A.size(); ++i)
                        d.data[i] += c * (A.data[i] - B.data[i]);
                }
                if (want(n.in1)) {
                    Tensor& d = gbuf(n.in1);
                    for (std::int64_t i = 0; i < A.size(); ++i)
                        d.data[i] -= c * (A.data[i] - B.data[i]);
                }
                break;
            }
            case Op::Conv2d: {
                const Tensor& X = at(n.in0).val;
                const Tensor& W = at(n.in1).val;
                const int N = X.dim(0), Ci = X.dim(1), H = X.dim(2), Wd = X.dim(3),
                          Co = W.dim(0);
                const int stride = static_cast<int>(n.aux0);
                if (want(n.in0))
                    kern::conv2d_bwd_input(g.data.data(), W.data.data(),
                                           gbuf(n.in0).data.data(), N, Ci, H, Wd, Co, stride);
                if (want(n.in1) || (n.in2 >= 0 && want(n.in2))) {
                    Tensor dw_local = Tensor::zeros(W.shape);
                    Tensor db_local = Tensor::zeros({Co});
                    kern::conv2d_bwd_weight(X.data.data(), g.data.data(), dw_local.data.data(),
                                            db_local.data.data(), N, Ci, H, Wd, Co, stride);
                    if (want(n.in1)) {
                        Tensor& d = gbuf(n.in1);
                        for (std::int64_t i = 0; i < d.size(); ++i)
                            d.data[i] += dw_local.data[i];
                    }
                    if (n.in2 >= 0 && want(n.in2)) {
                        Tensor& d = gbuf(n.in2);
                        for (std::int64_t i = 0; i < d.size(); ++i)
                            d.data[i] += db_local.data[i];
                    }
                }
                break;
            }
            case Op::Upsample2x:
                if (want(n.in0)) {
                    const Tensor& X = at(n.in0).val;
                    kern::upsample2x_bwd(g.data.data(), gbuf(n.in0).data.data(), X.dim(0),
                                         X.dim(1), X.dim(2), X.dim(3));
                }
                break;
            case Op::Reshape:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    for (std::int64_t i = 0; i < g.size(); ++i) d.data[i] += g.data[i];
                }
                break;
            case Op::GaussianLogProb: {
                const Tensor& X = at(n.in0).val;
                const Tensor& M = at(n.in1).val;
                const Tensor& T = at(n.in2).val;
                const bool bcast = !T.same_shape(X);
                const int cols = bcast ? X.dim(1) : 0;
                for (std::int64_t i = 0; i < X.size(); ++i) {
                    const std::int64_t ti = bcast ? (i % cols) : i;
                    const double inv_var = std::exp(-2.0 * T.data[ti]);
                    const double diff = X.data[i] - M.data[i];
                    const double gv = g.data[i];
                    if (want(n.in0)) gbuf(n.in0).data[i] += gv * (-diff * inv_var);
                    if (want(n.in1)) gbuf(n.in1).data[i] += gv * (diff * inv_var);
                    if (want(n.in2))
                        gbuf(n.in2).data[ti] += gv * (diff * diff * inv_var - 1.0);
                }
                break;
            }
            case Op::SquashLogDet:
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    const Tensor& U = at(n.in0).val;
                    for (std::int64_t i = 0; i < g.size(); ++i)
                        d.data[i] += g.data[i] * (-2.0 * std::tanh(U.data[i]));
                }
                break;
            case Op::KlDiagGaussian: {
                const Tensor& M = at(n.in0).val;
                const Tensor& T = at(n.in1).val;
                const double gv = g.data[0];
                if (want(n.in0)) {
                    Tensor& d = gbuf(n.in0);
                    for (std::int64_t i = 0; i < M.size(); ++i) d.data[i] += gv * M.data[i];
                }
                if (want(n.in1)) {
                    Tensor& d = gbuf(n.in1);
                    for (std::int64_t i = 0; i < T.size(); ++i)
                        d.data[i] += gv * (std::exp(2.0 * T.data[i]) - 1.0);
                }
                break;
            }
        }
    }
    ran_backward_ = true;
}

}  // namespace pg::grad
