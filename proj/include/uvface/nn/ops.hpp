#pragma once

#include "uvface/nn/tensor.hpp"

#include <span>

namespace uvface::nn {

/// Stride and zero padding for a square-kernel 2D convolution. Padding may be
/// asymmetric (pad_begin before the first row/column, pad_end after the last),
/// which is how even kernels keep "same" output size at stride 1.
struct Conv2dParams {
  int stride = 1;
  int pad_begin = 0;
  int pad_end = 0;

  int output_size(int input, int kernel) const;
};

/// Cross-correlation. x: (N, Cin, H, W), w: (Cout, Cin, K, K), b: (Cout) or undefined.
Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, const Conv2dParams& p);

/// Adjoint of conv2d with respect to its input, plus bias.
/// y: (N, Cout, h, w), w: (Cout, Cin, K, K) (same layout as the forward conv),
/// b: (Cin) or undefined. Produces (N, Cin, out_h, out_w); the sizes must satisfy
/// p.output_size(out_h, K) == h.
Tensor conv_transpose2d(const Tensor& y, const Tensor& w, const Tensor& b, const Conv2dParams& p, int out_h,
                        int out_w);

Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor add(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double factor);

/// Sum of all elements (shape (1)).
Tensor sum(const Tensor& x);
/// <x, c> for a constant c of the same size (shape (1)).
Tensor dot_const(const Tensor& x, std::span<const double> c);

}  // namespace uvface::nn
