#pragma once

#include <cstdint>

namespace pg::grad::kern {

// C(n,m) = or += A(n,k) * B(k,m)
void mm_nn(const double* A, const double* B, double* C, int n, int k, int m, bool accumulate);
// C(n,m) += A(n,k) * B(m,k)^T
void mm_nt(const double* A, const double* B, double* C, int n, int k, int m);
// C(k,m) += A(n,k)^T * B(n,m)
void mm_tn(const double* A, const double* B, double* C, int n, int k, int m);

// 3x3 convolution, zero padding 1, stride 1 or 2.
// x: (N,Ci,H,W), w: (Co,Ci,3,3), b: (Co) or nullptr, y: (N,Co,Ho,Wo)
int conv_out_dim(int in, int stride);
void conv2d_fwd(const double* x, const double* w, const double* b, double* y, int N, int Ci,
                int H, int W, int Co, int stride);
void conv2d_bwd_input(const double* dy, const double* w, double* dx, int N, int Ci, int H, int W,
                      int Co, int stride);
void conv2d_bwd_weight(const double* x, const double* dy, double* dw, double* db, int N, int Ci,
                       int H, int W, int Co, int stride);

// Nearest-neighbor 2x upsampling: (N,C,H,W) -> (N,C,2H,2W)
void upsample2x_fwd(const double* x, double* y, int N, int C, int H, int W);
void upsample2x_bwd(const double* dy, double* dx, int N, int C, int H, int W);

}  // namespace pg::grad::kern
