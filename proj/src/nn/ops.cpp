#include "uvface/nn/ops.hpp"

#include "uvface/error.hpp"

#include <Eigen/Core>

#include <cmath>

namespace uvface::nn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

struct ConvGeometry {
  int channels;  // channels of the "image" side being unfolded
  int height;
  int width;
  int kernel;
  int out_h;
  int out_w;
  Conv2dParams p;

  int rows() const { return channels * kernel * kernel; }
  int cols() const { return out_h * out_w; }
};

// cols[(c*K + ky)*K + kx][oy*out_w + ox] = img[c][oy*s + ky - pad][ox*s + kx - pad]
void im2col(const double* img, const ConvGeometry& g, double* cols) {
  const int K = g.kernel;
  const int s = g.p.stride;
  for (int c = 0; c < g.channels; ++c) {
    const double* plane = img + static_cast<std::size_t>(c) * g.height * g.width;
    for (int ky = 0; ky < K; ++ky) {
      for (int kx = 0; kx < K; ++kx) {
        double* dst = cols + static_cast<std::size_t>((c * K + ky) * K + kx) * g.cols();
        for (int oy = 0; oy < g.out_h; ++oy) {
          const int iy = oy * s + ky - g.p.pad_begin;
          double* row = dst + static_cast<std::size_t>(oy) * g.out_w;
          if (iy < 0 || iy >= g.height) {
            std::fill(row, row + g.out_w, 0.0);
            continue;
          }
          const double* src = plane + static_cast<std::size_t>(iy) * g.width;
          for (int ox = 0; ox < g.out_w; ++ox) {
            const int ix = ox * s + kx - g.p.pad_begin;
            row[ox] = (ix >= 0 && ix < g.width) ? src[ix] : 0.0;
          }
        }
      }
    }
  }
}

// Scatter-add inverse of im2col.
void col2im_add(const double* cols, const ConvGeometry& g, double* img) {
  const int K = g.kernel;
  const int s = g.p.stride;
  for (int c = 0; c < g.channels; ++c) {
    double* plane = img + static_cast<std::size_t>(c) * g.height * g.width;
    for (int ky = 0; ky < K; ++ky) {
      for (int kx = 0; kx < K; ++kx) {
        const double* srcrow = cols + static_cast<std::size_t>((c * K + ky) * K + kx) * g.cols();
        for (int oy = 0; oy < g.out_h; ++oy) {
          const int iy = oy * s + ky - g.p.pad_begin;
          if (iy < 0 || iy >= g.height) continue;
          double* dst = plane + static_cast<std::size_t>(iy) * g.width;
          const double* row = srcrow + static_cast<std::size_t>(oy) * g.out_w;
          for (int ox = 0; ox < g.out_w; ++ox) {
            const int ix = ox * s + kx - g.p.pad_begin;
            if (ix >= 0 && ix < g.width) dst[ix] += row[ox];
          }
        }
      }
    }
  }
}

void check_rank(const Tensor& t, std::size_t rank, const char* what) {
  if (!t.defined() || t.shape().size() != rank) {
    throw ShapeError(std::string(what) + " must have rank " + std::to_string(rank) +
                     (t.defined() ? ", got " + shape_str(t.shape()) : std::string(", got undefined")));
  }
}

void check_bias(const Tensor& b, int channels) {
  if (!b.defined()) return;
  if (b.shape() != Shape{channels}) {
    throw ShapeError("bias shape " + shape_str(b.shape()) + " does not match " + std::to_string(channels) +
                     " channels");
  }
}

}  // namespace

int Conv2dParams::output_size(int input, int kernel) const {
  if (stride <= 0 || pad_begin < 0 || pad_end < 0) throw ShapeError("invalid convolution stride/padding");
  const int span = input + pad_begin + pad_end - kernel;
  if (span < 0) throw ShapeError("kernel larger than padded input");
  return span / stride + 1;
}

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, const Conv2dParams& p) {
  check_rank(x, 4, "conv2d input");
  check_rank(w, 4, "conv2d weight");
  const int N = x.dim(0), Cin = x.dim(1), H = x.dim(2), W = x.dim(3);
  const int Cout = w.dim(0), K = w.dim(2);
  if (w.dim(1) != Cin || w.dim(3) != K) {
    throw ShapeError("conv2d weight " + shape_str(w.shape()) + " incompatible with input " + shape_str(x.shape()));
  }
  check_bias(b, Cout);
  const ConvGeometry g{Cin, H, W, K, p.output_size(H, K), p.output_size(W, K), p};
  if (g.out_h <= 0 || g.out_w <= 0) throw ShapeError("conv2d produces an empty output");

  const std::size_t in_stride = static_cast<std::size_t>(Cin) * H * W;
  const std::size_t out_stride = static_cast<std::size_t>(Cout) * g.cols();
  std::vector<double> out(static_cast<std::size_t>(N) * out_stride);
  std::vector<double> cols(static_cast<std::size_t>(g.rows()) * g.cols());
  ConstMapMat Wm(w.values().data(), Cout, g.rows());
  for (int n = 0; n < N; ++n) {
    im2col(x.values().data() + n * in_stride, g, cols.data());
    MapMat O(out.data() + n * out_stride, Cout, g.cols());
    O.noalias() = Wm * ConstMapMat(cols.data(), g.rows(), g.cols());
    if (b.defined()) {
      for (int c = 0; c < Cout; ++c) O.row(c).array() += b.values()[c];
    }
  }

  const bool has_bias = b.defined();
  return make_result({N, Cout, g.out_h, g.out_w}, std::move(out), {x, w, b},
                     [g, N, Cout, in_stride, out_stride, has_bias](Node& self) {
                       Node& xn = *self.parents[0];
                       Node& wn = *self.parents[1];
                       ConstMapMat Wm(wn.value.data(), Cout, g.rows());
                       std::vector<double> cols(static_cast<std::size_t>(g.rows()) * g.cols());
                       for (int n = 0; n < N; ++n) {
                         ConstMapMat dO(self.grad.data() + n * out_stride, Cout, g.cols());
                         if (wn.requires_grad) {
                           im2col(xn.value.data() + n * in_stride, g, cols.data());
                           MapMat(wn.ensure_grad().data(), Cout, g.rows()).noalias() +=
                               dO * ConstMapMat(cols.data(), g.rows(), g.cols()).transpose();
                         }
                         if (xn.requires_grad) {
                           MapMat dcols(cols.data(), g.rows(), g.cols());
                           dcols.noalias() = Wm.transpose() * dO;
                           col2im_add(cols.data(), g, xn.ensure_grad().data() + n * in_stride);
                         }
                         if (has_bias && self.parents[2]->requires_grad) {
                           auto& db = self.parents[2]->ensure_grad();
                           for (int c = 0; c < Cout; ++c) db[c] += dO.row(c).sum();
                         }
                       }
                     });
}

Tensor conv_transpose2d(const Tensor& y, const Tensor& w, const Tensor& b, const Conv2dParams& p, int out_h,
                        int out_w) {
  check_rank(y, 4, "conv_transpose2d input");
  check_rank(w, 4, "conv_transpose2d weight");
  const int N = y.dim(0), Cy = y.dim(1), h = y.dim(2), wd = y.dim(3);
  const int Cout = w.dim(1), K = w.dim(2);
  if (w.dim(0) != Cy || w.dim(3) != K) {
    throw ShapeError("conv_transpose2d weight " + shape_str(w.shape()) + " incompatible with input " +
                     shape_str(y.shape()));
  }
  check_bias(b, Cout);
  if (out_h <= 0 || out_w <= 0 || p.output_size(out_h, K) != h || p.output_size(out_w, K) != wd) {
    throw ShapeError("conv_transpose2d output " + std::to_string(out_h) + "x" + std::to_string(out_w) +
                     " is not consistent with input " + shape_str(y.shape()));
  }
  // Geometry of the forward conv this op is the adjoint of: image side = output here.
  const ConvGeometry g{Cout, out_h, out_w, K, h, wd, p};
  const std::size_t in_stride = static_cast<std::size_t>(Cy) * g.cols();
  const std::size_t out_stride = static_cast<std::size_t>(Cout) * out_h * out_w;

  std::vector<double> out(static_cast<std::size_t>(N) * out_stride, 0.0);
  std::vector<double> cols(static_cast<std::size_t>(g.rows()) * g.cols());
  ConstMapMat Wm(w.values().data(), Cy, g.rows());
  for (int n = 0; n < N; ++n) {
    MapMat(cols.data(), g.rows(), g.cols()).noalias() =
        Wm.transpose() * ConstMapMat(y.values().data() + n * in_stride, Cy, g.cols());
    double* o = out.data() + n * out_stride;
    col2im_add(cols.data(), g, o);
    if (b.defined()) {
      const std::size_t plane = static_cast<std::size_t>(out_h) * out_w;
      for (int c = 0; c < Cout; ++c) {
        const double bc = b.values()[c];
        for (std::size_t i = 0; i < plane; ++i) o[c * plane + i] += bc;
      }
    }
  }

  const bool has_bias = b.defined();
  return make_result({N, Cout, out_h, out_w}, std::move(out), {y, w, b},
                     [g, N, Cy, in_stride, out_stride, has_bias](Node& self) {
                       Node& yn = *self.parents[0];
                       Node& wn = *self.parents[1];
                       ConstMapMat Wm(wn.value.data(), Cy, g.rows());
                       std::vector<double> cols(static_cast<std::size_t>(g.rows()) * g.cols());
                       for (int n = 0; n < N; ++n) {
                         im2col(self.grad.data() + n * out_stride, g, cols.data());
                         ConstMapMat G(cols.data(), g.rows(), g.cols());
                         if (yn.requires_grad) {
                           MapMat(yn.ensure_grad().data() + n * in_stride, Cy, g.cols()).noalias() += Wm * G;
                         }
                         if (wn.requires_grad) {
                           MapMat(wn.ensure_grad().data(), Cy, g.rows()).noalias() +=
                               ConstMapMat(yn.value.data() + n * in_stride, Cy, g.cols()) * G.transpose();
                         }
                         if (has_bias && self.parents[2]->requires_grad) {
                           auto& db = self.parents[2]->ensure_grad();
                           const std::size_t plane = static_cast<std::size_t>(g.height) * g.width;
                           const double* go = self.grad.data() + n * out_stride;
                           for (int c = 0; c < g.channels; ++c) {
                             double s = 0.0;
                             for (std::size_t i = 0; i < plane; ++i) s += go[c * plane + i];
                             db[c] += s;
                           }
                         }
                       }
                     });
}

Tensor relu(const Tensor& x) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (double& v : out) v = v > 0.0 ? v : 0.0;
  return make_result(x.shape(), std::move(out), {x}, [](Node& self) {
    Node& xn = *self.parents[0];
    auto& g = xn.ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (xn.value[i] > 0.0) g[i] += self.grad[i];
    }
  });
}

Tensor sigmoid(const Tensor& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = x.values()[i];
    out[i] = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
  }
  return make_result(x.shape(), std::move(out), {x}, [](Node& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * self.value[i] * (1.0 - self.value[i]);
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("add: shapes " + shape_str(a.shape()) + " and " + shape_str(b.shape()) + " differ");
  }
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] + b.values()[i];
  // a and b may be the same tensor, in which case the parent list holds it twice.
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    for (auto& parent : self.parents) {
      if (!parent->requires_grad) continue;
      auto& g = parent->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Tensor scale(const Tensor& x, double factor) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (double& v : out) v *= factor;
  return make_result(x.shape(), std::move(out), {x}, [factor](Node& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += factor * self.grad[i];
  });
}

Tensor sum(const Tensor& x) {
  double s = 0.0;
  for (double v : x.values()) s += v;
  return make_result({1}, {s}, {x}, [](Node& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (double& v : g) v += self.grad[0];
  });
}

Tensor dot_const(const Tensor& x, std::span<const double> c) {
  if (c.size() != x.size()) throw ShapeError("dot_const: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += x.values()[i] * c[i];
  std::vector<double> coeffs(c.begin(), c.end());
  return make_result({1}, {s}, {x}, [coeffs = std::move(coeffs)](Node& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[0] * coeffs[i];
  });
}

}  // namespace uvface::nn
