#include "pg/gradcore/kernels.hpp"

#include <cstring>
#include <stdexcept>

#include "pg/gradcore/parallel.hpp"

namespace pg::grad::kern {

void mm_nn(const double* A, const double* B, double* C, int n, int k, int m, bool accumulate) {
    parallel_for(n, 16, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            double* ci = C + i * m;
            if (!accumulate)
                for (int j = 0; j < m; ++j) ci[j] = 0.0;
            const double* ai = A + i * k;
            for (int p = 0; p < k; ++p) {
                const double a = ai[p];
                const double* bp = B + static_cast<std::int64_t>(p) * m;
                for (int j = 0; j < m; ++j) ci[j] += a * bp[j];
            }
        }
    });
}

void mm_nt(const double* A, const double* B, double* C, int n, int k, int m) {
    parallel_for(n, 16, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            const double* ai = A + i * k;
            double* ci = C + i * m;
            for (int j = 0; j < m; ++j) {
                const double* bj = B + static_cast<std::int64_t>(j) * k;
                double acc = 0.0;
                for (int p = 0; p < k; ++p) acc += ai[p] * bj[p];
                ci[j] += acc;
            }
        }
    });
}

void mm_tn(const double* A, const double* B, double* C, int n, int k, int m) {
    parallel_for(k, 8, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t a = lo; a < hi; ++a) {
            double* ca = C + a * m;
            for (int i = 0; i < n; ++i) {
                const double v = A[static_cast<std::int64_t>(i) * k + a];
                const double* bi = B + static_cast<std::int64_t>(i) * m;
                for (int j = 0; j < m; ++j) ca[j] += v * bi[j];
            }
        }
    });
}

int conv_out_dim(int in, int stride) { return (in + 2 - 3) / stride + 1; }

void conv2d_fwd(const double* x, const double* w, const double* b, double* y, int N, int Ci,
                int H, int W, int Co, int stride) {
    const int Ho = conv_out_dim(H, stride);
    const int Wo = conv_out_dim(W, stride);
    const std::int64_t jobs = static_cast<std::int64_t>(N) * Co;
    parallel_for(jobs, 1, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t job = lo; job < hi; ++job) {
            const int n = static_cast<int>(job / Co);
            const int co = static_cast<int>(job % Co);
            double* yp = y + ((static_cast<std::int64_t>(n) * Co + co) * Ho) * Wo;
            const double bias = b ? b[co] : 0.0;
            for (int ho = 0; ho < Ho; ++ho) {
                for (int wo = 0; wo < Wo; ++wo) {
                    double acc = bias;
                    const int hi0 = ho * stride - 1;
                    const int wi0 = wo * stride - 1;
                    for (int ci = 0; ci < Ci; ++ci) {
                        const double* xp = x + ((static_cast<std::int64_t>(n) * Ci + ci) * H) * W;
                        const double* wp =
                            w + ((static_cast<std::int64_t>(co) * Ci + ci) * 3) * 3;
                        for (int kh = 0; kh < 3; ++kh) {
                            const int hh = hi0 + kh;
                            if (hh < 0 || hh >= H) continue;
                            for (int kw = 0; kw < 3; ++kw) {
                                const int ww = wi0 + kw;
                                if (ww < 0 || ww >= W) continue;
                                acc += xp[static_cast<std::int64_t>(hh) * W + ww] *
                                       wp[kh * 3 + kw];
                            }
                        }
                    }
                    yp[static_cast<std::int64_t>(ho) * Wo + wo] = acc;
                }
            }
        }
    });
}

void conv2d_bwd_input(const double* dy, const double* w, double* dx, int N, int Ci, int H, int W,
                      int Co, int stride) {
    const int Ho = conv_out_dim(H, stride);
    const int Wo = conv_out_dim(W, stride);
    // One thread owns all of sample n's dx, so accumulation order is fixed.
    parallel_for(N, 1, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t n = lo; n < hi; ++n) {
            for (int co = 0; co < Co; ++co) {
                const double* dyp = dy + ((n * Co + co) * Ho) * Wo;
                for (int ho = 0; ho < Ho; ++ho) {
                    for (int wo = 0; wo < Wo; ++wo) {
                        const double g = dyp[static_cast<std::int64_t>(ho) * Wo + wo];
                        if (g == 0.0) continue;
                        const int hi0 = ho * stride - 1;
                        const int wi0 = wo * stride - 1;
                        for (int ci = 0; ci < Ci; ++ci) {
                            double* dxp = dx + ((n * Ci + ci) * H) * W;
                            const double* wp =
                                w + ((static_cast<std::int64_t>(co) * Ci + ci) * 3) * 3;
                            for (int kh = 0; kh < 3; ++kh) {
                                const int hh = hi0 + kh;
                                if (hh < 0 || hh >= H) continue;
                                for (int kw = 0; kw < 3; ++kw) {
                                    const int ww = wi0 + kw;
                                    if (ww < 0 || ww >= W) continue;
                                    dxp[static_cast<std::int64_t>(hh) * W + ww] +=
                                        g * wp[kh * 3 + kw];
                                }
                            }
                        }
                    }
                }
            }
        }
    });
}

void conv2d_bwd_weight(const double* x, const double* dy, double* dw, double* db, int N, int Ci,
                       int H, int W, int Co, int stride) {
    const int Ho = conv_out_dim(H, stride);
    const int Wo = conv_out_dim(W, stride);
    // One thread owns output channel co's dw/db slice.
    parallel_for(Co, 1, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t co = lo; co < hi; ++co) {
            double* dwp = dw + ((co * Ci) * 3) * 3;
            double bacc = db ? db[co] : 0.0;
            for (int n = 0; n < N; ++n) {
                const double* dyp = dy + ((static_cast<std::int64_t>(n) * Co + co) * Ho) * Wo;
                for (int ho = 0; ho < Ho; ++ho) {
                    for (int wo = 0; wo < Wo; ++wo) {
                        const double g = dyp[static_cast<std::int64_t>(ho) * Wo + wo];
                        if (g == 0.0) continue;
                        bacc += g;
                        const int hi0 = ho * stride - 1;
                        const int wi0 = wo * stride - 1;
                        for (int ci = 0; ci < Ci; ++ci) {
                            const double* xp =
                                x + ((static_cast<std::int64_t>(n) * Ci + ci) * H) * W;
                            double* dwc = dwp + (static_cast<std::int64_t>(ci) * 3) * 3;
                            for (int kh = 0; kh < 3; ++kh) {
                                const int hh = hi0 + kh;
                                if (hh < 0 || hh >= H) continue;
                                for (int kw = 0; kw < 3; ++kw) {
                                    const int ww = wi0 + kw;
                                    if (ww < 0 || ww >= W) continue;
                                    dwc[kh * 3 + kw] +=
                                        g * xp[static_cast<std::int64_t>(hh) * W + ww];
                                }
                            }
                        }
                    }
                }
            }
            if (db) db[co] = bacc;
        }
    });
}

void upsample2x_fwd(const double* x, double* y, int N, int C, int H, int W) {
    const std::int64_t planes = static_cast<std::int64_t>(N) * C;
    parallel_for(planes, 4, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) {
            const double* xp = x + p * H * W;
            double* yp = y + p * 4 * H * W;
            const int W2 = 2 * W;
            for (int h = 0; h < H; ++h) {
                for (int w = 0; w < W; ++w) {
                    const double v = xp[static_cast<std::int64_t>(h) * W + w];
                    double* row0 = yp + static_cast<std::int64_t>(2 * h) * W2 + 2 * w;
                    row0[0] = v;
                    row0[1] = v;
                    row0[W2] = v;
                    row0[W2 + 1] = v;
                }
            }
        }
    });
}

void upsample2x_bwd(const double* dy, double* dx, int N, int C, int H, int W) {
    const std::int64_t planes = static_cast<std::int64_t>(N) * C;
    parallel_for(planes, 4, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) {
            const double* dyp = dy + p * 4 * H * W;
            double* dxp = dx + p * H * W;
            const int W2 = 2 * W;
            for (int h = 0; h < H; ++h) {
                for (int w = 0; w < W; ++w) {
                    const double* row0 = dyp + static_cast<std::int64_t>(2 * h) * W2 + 2 * w;
                    dxp[static_cast<std::int64_t>(h) * W + w] +=
                        row0[0] + row0[1] + row0[W2] + row0[W2 + 1];
                }
            }
        }
    });
}

}  // namespace pg::grad::kern
