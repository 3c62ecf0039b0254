#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pg/gradcore/adam.hpp"
#include "pg/gradcore/params.hpp"
#include "pg/gradcore/rng.hpp"
#include "pg/gradcore/tape.hpp"

using namespace pg::grad;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, double lo = -2.0, double hi = 2.0,
                     double keep_away_from = 0.0, double margin = 0.0) {
    Tensor t = Tensor::zeros(std::move(shape));
    for (auto& v : t.data) {
        do {
            v = rng.uniform(lo, hi);
        } while (margin > 0.0 && std::fabs(v - keep_away_from) < margin);
    }
    return t;
}

}  // namespace

TEST_CASE("matmul identity and shape errors") {
    Tape t;
    const int I = t.leaf(Tensor::from({2, 2}, {1, 0, 0, 1}));
    const int A = t.leaf(Tensor::from({2, 2}, {3.5, -1.25, 0.75, 2.0}));
    const int C = t.matmul(I, A);
    CHECK(t.value(C).data == t.value(A).data);

    const int bad = t.leaf(Tensor::zeros({3, 2}));
    CHECK_THROWS_WITH_AS((void)t.matmul(A, bad), doctest::Contains("matmul"),
                         std::invalid_argument);
}

TEST_CASE("relu definition") {
    Tape t;
    const int x = t.leaf(Tensor::from({3}, {-1, 0, 2}));
    const int y = t.relu(x);
    CHECK(t.value(y).data == std::vector<double>{0, 0, 2});
}

TEST_CASE("conv2d on a 4x4 field of ones") {
    // Direct convolution sum: interior sees all 9 taps, corners see 4.
    Tape t;
    const int x = t.leaf(Tensor::full({1, 1, 4, 4}, 1.0));
    const int w = t.leaf(Tensor::full({1, 1, 3, 3}, 1.0));
    const int y = t.conv2d(x, w, -1, 1);
    const Tensor& out = t.value(y);
    REQUIRE(out.shape == std::vector<int>{1, 1, 4, 4});
    CHECK(out.data[0] == doctest::Approx(4.0));   // corner
    CHECK(out.data[3] == doctest::Approx(4.0));
    CHECK(out.data[5] == doctest::Approx(9.0));   // interior
    CHECK(out.data[6] == doctest::Approx(9.0));
    CHECK(out.data[1] == doctest::Approx(6.0));   // edge
}

TEST_CASE("conv2d stride 2 output shape") {
    Tape t;
    const int x = t.leaf(Tensor::full({2, 3, 8, 8}, 0.5));
    const int w = t.leaf(Tensor::full({4, 3, 3, 3}, 0.1));
    const int b = t.leaf(Tensor::zeros({4}));
    const int y = t.conv2d(x, w, b, 2);
    CHECK(t.value(y).shape == std::vector<int>{2, 4, 4, 4});
}

TEST_CASE("backward of sum is all ones; mse convention") {
    Tape t;
    Tensor x = Tensor::from({2, 3}, {1, -2, 3, 0.5, 4, -1});
    x.requires_grad = true;
    const int xi = t.leaf(x);
    const int s = t.sum(xi);
    t.backward(s);
    for (double g : t.grad(xi).data) CHECK(g == doctest::Approx(1.0));

    Tape t2;
    Tensor v = Tensor::from({1}, {3.0});
    v.requires_grad = true;
    const int vi = t2.leaf(v);
    const int z = t2.leaf(Tensor::zeros({1}));
    const int loss = t2.mse(vi, z);
    t2.backward(loss);
    CHECK(t2.grad(vi).data[0] == doctest::Approx(6.0));
}

TEST_CASE("non-scalar loss is rejected") {
    Tape t;
    const int x = t.leaf(Tensor::zeros({3}), true);
    CHECK_THROWS_AS(t.backward(x), std::invalid_argument);
}

TEST_CASE("zero loss yields all-zero gradients") {
    Tape t;
    Rng rng(7);
    Tensor x = random_tensor({4, 4}, rng);
    x.requires_grad = true;
    const int xi = t.leaf(x);
    const int zero = t.scale(t.sum(xi), 0.0);
    t.backward(zero);
    for (double g : t.grad(xi).data) CHECK(g == 0.0);
}

TEST_CASE("gaussian logprob values and gradient") {
    Tape t;
    const int x0 = t.leaf(Tensor::scalar(0.0));
    const int mu0 = t.leaf(Tensor::scalar(0.0));
    const int ls0 = t.leaf(Tensor::scalar(0.0));
    CHECK(t.value(t.gaussian_logprob(x0, mu0, ls0)).data[0] ==
          doctest::Approx(-0.9189385332).epsilon(1e-9));

    const int x1 = t.leaf(Tensor::scalar(1.0));
    CHECK(t.value(t.gaussian_logprob(x1, mu0, ls0)).data[0] ==
          doctest::Approx(-1.4189385332).epsilon(1e-9));

    // d logprob / d mu at x=2, mu=0, sigma=2 is (x-mu)/sigma^2 = 0.5.
    Tape t2;
    const int x = t2.leaf(Tensor::scalar(2.0));
    Tensor mu = Tensor::scalar(0.0);
    mu.requires_grad = true;
    const int mi = t2.leaf(mu);
    const int ls = t2.leaf(Tensor::scalar(std::log(2.0)));
    const int lp = t2.sum(t2.gaussian_logprob(x, mi, ls));
    t2.backward(lp);
    CHECK(t2.grad(mi).data[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("kl against closed form and Monte-Carlo oracle") {
    Tape t;
    const int mu0 = t.leaf(Tensor::zeros({4}));
    const int ls0 = t.leaf(Tensor::zeros({4}));
    CHECK(t.value(t.kl_diag_gaussian(mu0, ls0)).data[0] == doctest::Approx(0.0));

    const int mu1 = t.leaf(Tensor::from({1}, {1.0}));
    const int ls1 = t.leaf(Tensor::zeros({1}));
    CHECK(t.value(t.kl_diag_gaussian(mu1, ls1)).data[0] == doctest::Approx(0.5));

    const std::vector<double> mu{0.3, -0.2};
    const std::vector<double> sigma{0.5, 2.0};
    const int mi = t.leaf(Tensor::from({2}, mu));
    const int li = t.leaf(Tensor::from({2}, {std::log(sigma[0]), std::log(sigma[1])}));
    const double analytic = t.value(t.kl_diag_gaussian(mi, li)).data[0];
    const double mc = oracle::mc_kl_diag_gaussian(mu, sigma, 1000000, 42);
    CHECK(std::fabs(analytic - mc) < 1e-2);
}

TEST_CASE("kl is nonnegative and zero only at the prior") {
    Rng rng(11);
    Tape t;
    for (int i = 0; i < 50; ++i) {
        const int mu = t.leaf(random_tensor({3}, rng));
        const int ls = t.leaf(random_tensor({3}, rng, -1.5, 1.5));
        CHECK(t.value(t.kl_diag_gaussian(mu, ls)).data[0] >= 0.0);
    }
}

TEST_CASE("finite differences across the op set") {
    Rng rng(1234);
    double worst = 0.0;
    auto check = [&](std::vector<Tensor> ins,
                     std::function<int(Tape&, const std::vector<int>&)> build) {
        const auto rep = oracle::fd_check(std::move(ins), build);
        worst = std::max(worst, rep.max_rel);
        CHECK(rep.max_rel < 1e-4);
    };

    // Random read-out weights make every output element reach the loss.
    auto weighted_sum = [&](Tape& t, int node, std::uint64_t salt) {
        Rng wr(salt);
        Tensor w = Tensor::zeros(t.value(node).shape);
        for (auto& v : w.data) v = wr.uniform(-1.0, 1.0);
        return t.sum(t.mul(node, t.leaf(w)));
    };

    for (int rep = 0; rep < 10; ++rep) {
        const std::uint64_t salt = 100 + rep;
        check({random_tensor({3, 4}, rng), random_tensor({4, 2}, rng)},
              [&](Tape& t, const std::vector<int>& in) {
                  return weighted_sum(t, t.matmul(in[0], in[1]), salt);
              });
        check({random_tensor({2, 5}, rng), random_tensor({2, 5}, rng)},
              [&](Tape& t, const std::vector<int>& in) {
                  return weighted_sum(t, t.add(in[0], in[1]), salt);
              });
        check({random_tensor({3, 4}, rng), random_tensor({4}, rng)},
              [&](Tape& t, const std::vector<int>& in) {
                  return weighted_sum(t, t.add_bias(in[0], in[1]), salt);
              });
        check({random_tensor({6}, rng), random_tensor({6}, rng)},
              [&](Tape& t, const std::vector<int>& in) {
                  return weighted_sum(t, t.mul(t.sub(in[0], in[1]), in[0]), salt);
              });
        check({random_tensor({7}, rng, -2, 2, 0.0, 1e-3)},
              [&](Tape& t, const std::vector<int>& in) {
                  return weighted_sum(t, t.relu(in[0]), salt);
              });
        check({random_tensor({7}, rng)}, [&](Tape& t, const std::vector<int>& in) {
            return weighted_sum(t, t.tanh_(in[0]), salt);
        });
        check({random_tensor({5}, rng, -1.5, 1.5)}, [&](Tape& t, const std::vector<int>& in) {
            return weighted_sum(t, t.exp_(in[0]), salt);
        });
        check({random_tensor({5}, rng, 0.1, 2.2)}, [&](Tape& t, const std::vector<int>& in) {
            return weighted_sum(t, t.log_(in[0]), salt);
        });
        {
            // keep entries away from both clamp knees at +-1
            Tensor c = Tensor::zeros({9});
            for (auto& v : c.data) {
                do {
                    v = rng.uniform(-2.0, 2.0);
                } while (std::fabs(std::fabs(v) - 1.0) < 1e-3);
            }
            check({c}, [&](Tape& t, const std::vector<int>& in) {
                return weighted_sum(t, t.clamp(in[0], -1.0, 1.0), salt);
            });
        }
        check({random_tensor({8}, rng), random_tensor({8}, rng)},
              [&](Tape& t, const std::vector<int>& in) {
                  return weighted_sum(t, t.minimum(in[0], in[1]), salt);
              });
        check({random_tensor({3, 5}, rng)}, [&](Tape& t, const std::vector<int>& in) {
            return t.mean(in[0]);
        });
        check({random_tensor({4, 3}, rng)}, [&](Tape& t, const std::vector<int>& in) {
            return weighted_sum(t, t.row_sum(in[0]), salt);
        });
        check({random_tensor({2, 6}, rng), random_tensor({2, 6}, rng)},
              [&](Tape& t, const std::vector<int>& in) { return t.mse(in[0], in[1]); });
        check({random_tensor({1, 2, 4, 4}, rng), random_tensor({3, 2, 3, 3}, rng),
               random_tensor({3}, rng)},
              [&](Tape& t, const std::vector<int>& in) {
                  return weighted_sum(t, t.conv2d(in[0], in[1], in[2], 1), salt);
              });
        check({random_tensor({1, 2, 4, 4}, rng), random_tensor({2, 2, 3, 3}, rng),
               random_tensor({2}, rng)},
              [&](Tape& t, const std::vector<int>& in) {
                  return weighted_sum(t, t.conv2d(in[0], in[1], in[2], 2), salt);
              });
        check({random_tensor({1, 3, 2, 2}, rng)}, [&](Tape& t, const std::vector<int>& in) {
            return weighted_sum(t, t.upsample2x(in[0]), salt);
        });
        check({random_tensor({2, 6}, rng)}, [&](Tape& t, const std::vector<int>& in) {
            return weighted_sum(t, t.reshape(in[0], {3, 4}), salt);
        });
        check({random_tensor({2, 3}, rng), random_tensor({2, 3}, rng),
               random_tensor({3}, rng, -1.0, 1.0)},
              [&](Tape& t, const std::vector<int>& in) {
                  return weighted_sum(t, t.gaussian_logprob(in[0], in[1], in[2]), salt);
              });
        check({random_tensor({6}, rng)}, [&](Tape& t, const std::vector<int>& in) {
            return weighted_sum(t, t.squash_logdet(in[0]), salt);
        });
        check({random_tensor({4}, rng), random_tensor({4}, rng, -1.2, 1.2)},
              [&](Tape& t, const std::vector<int>& in) {
                  return t.kl_diag_gaussian(in[0], in[1]);
              });
    }
    MESSAGE("worst relative error: ", worst);
}

TEST_CASE("three-layer network gradient vs finite differences") {
    Rng rng(99);
    std::vector<Tensor> params = {
        random_tensor({4, 8}, rng, -0.8, 0.8),  random_tensor({8}, rng, -0.5, 0.5),
        random_tensor({8, 6}, rng, -0.8, 0.8),  random_tensor({6}, rng, -0.5, 0.5),
        random_tensor({6, 2}, rng, -0.8, 0.8),  random_tensor({2}, rng, -0.5, 0.5),
    };
    const Tensor x = random_tensor({5, 4}, rng);
    const Tensor target = random_tensor({5, 2}, rng);
    const auto rep = oracle::fd_check(params, [&](Tape& t, const std::vector<int>& p) {
        const int xi = t.leaf(x);
        int h = t.tanh_(t.add_bias(t.matmul(xi, p[0]), p[1]));
        h = t.relu(t.add_bias(t.matmul(h, p[2]), p[3]));
        const int out = t.add_bias(t.matmul(h, p[4]), p[5]);
        return t.mse(out, t.leaf(target));
    });
    CHECK(rep.max_rel < 1e-4);
    CHECK(rep.checked == 4 * 8 + 8 + 8 * 6 + 6 + 6 * 2 + 2);
}

TEST_CASE("adam zero gradient is a fixed point") {
    ParamSet ps;
    Tensor& w = ps.add("w", Tensor::from({3}, {1.0, -2.0, 0.5}));
    const Tensor before = w;
    AdamState adam(0.1);
    const Tensor zero = Tensor::zeros({3});
    for (int i = 0; i < 10; ++i) adam.step(ps, {&zero});
    CHECK(w.data == before.data);
}

TEST_CASE("adam first step is a bias-corrected unit step") {
    ParamSet ps;
    Tensor& w = ps.add("w", Tensor::from({1}, {0.0}));
    AdamState adam(0.1);
    const Tensor g = Tensor::from({1}, {1.0});
    adam.step(ps, {&g});
    CHECK(w.data[0] == doctest::Approx(-0.1).epsilon(1e-6));
}

TEST_CASE("adam descends a quadratic bowl") {
    ParamSet ps;
    Tensor& w = ps.add("w", Tensor::from({1}, {1.0}));
    AdamState adam(0.005);
    for (int i = 0; i < 2000; ++i) {
        const Tensor g = Tensor::from({1}, {2.0 * w.data[0]});
        adam.step(ps, {&g});
    }
    CHECK(std::fabs(w.data[0]) < 0.1);
}

TEST_CASE("adam rejects a missing gradient by name") {
    ParamSet ps;
    ps.add("weights", Tensor::zeros({2}));
    AdamState adam(0.1);
    CHECK_THROWS_WITH_AS(adam.step(ps, {nullptr}), doctest::Contains("weights"),
                         std::invalid_argument);
}

TEST_CASE("orthogonal init produces orthonormal columns") {
    Rng rng(5);
    Tensor w = Tensor::zeros({8, 4});
    orthogonal_init(w, rng, 1.0);
    for (int c1 = 0; c1 < 4; ++c1)
        for (int c2 = 0; c2 <= c1; ++c2) {
            double dot = 0.0;
            for (int r = 0; r < 8; ++r) dot += w.data[r * 4 + c1] * w.data[r * 4 + c2];
            CHECK(dot == doctest::Approx(c1 == c2 ? 1.0 : 0.0).epsilon(1e-9));
        }
}
