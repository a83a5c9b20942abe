#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exchpairs/direction.hpp"
#include "exchpairs/error.hpp"
#include "exchpairs/metrics.hpp"
#include "exchpairs/priors.hpp"
#include "exchpairs/rng.hpp"

namespace exchpairs {

inline constexpr std::size_t kImageSide = 50;

// Square scatter raster, row-major with pixel (row j, column i) at j * n + i.
struct Image {
  std::vector<double> pix;
  std::size_t n = 0;

  Image() = default;
  explicit Image(std::size_t side) : pix(side * side, 0.0), n(side) {}

  double& at(std::size_t j, std::size_t i) { return pix[j * n + i]; }
  double at(std::size_t j, std::size_t i) const { return pix[j * n + i]; }
  bool operator==(const Image&) const = default;
};

inline Image rasterize(const std::vector<double>& xs,
                       const std::vector<double>& ys,
                       std::size_t n = kImageSide) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("rasterize needs equal-length vectors");
  }
  if (n < 2) throw std::invalid_argument("image side must be at least 2");
  Image img(n);
  const double span = static_cast<double>(n - 1);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] >= 0.0 && xs[k] <= 1.0 && ys[k] >= 0.0 && ys[k] <= 1.0)) {
      throw std::invalid_argument("rasterize expects coordinates in [0, 1]");
    }
    const auto i = static_cast<std::size_t>(std::floor(xs[k] * span));
    const auto j = static_cast<std::size_t>(std::floor(ys[k] * span));
    img.at(j, i) = 1.0;
  }
  return img;
}

namespace detail {

inline std::size_t reflect_index(long long idx, long long n) {
  while (idx < 0 || idx >= n) {
    if (idx < 0) idx = -idx - 1;
    if (idx >= n) idx = 2 * n - idx - 1;
  }
  return static_cast<std::size_t>(idx);
}

}  // namespace detail

// Separable Gaussian convolution with symmetric (reflective) borders and a
// kernel truncated at radius ceil(3 sigma). With renormalize the result is
// scaled so its maximum is 1, keeping the binary-image dynamic range.
inline Image gaussian_blur(const Image& img, double sigma,
                           bool renormalize = true) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
  if (sigma == 0.0) return img;

  const auto radius = static_cast<long long>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double ksum = 0.0;
  for (long long k = -radius; k <= radius; ++k) {
    const double v = std::exp(-static_cast<double>(k * k) /
                              (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = v;
    ksum += v;
  }
  for (double& v : kernel) v /= ksum;

  const auto n = static_cast<long long>(img.n);
  Image tmp(img.n);
  Image out(img.n);
  for (long long j = 0; j < n; ++j) {
    for (long long i = 0; i < n; ++i) {
      double acc = 0.0;
      for (long long k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               img.pix[static_cast<std::size_t>(j) * img.n +
                       detail::reflect_index(i + k, n)];
      }
      tmp.at(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = acc;
    }
  }
  for (long long j = 0; j < n; ++j) {
    for (long long i = 0; i < n; ++i) {
      double acc = 0.0;
      for (long long k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               tmp.pix[detail::reflect_index(j + k, n) * img.n +
                       static_cast<std::size_t>(i)];
      }
      out.at(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = acc;
    }
  }
  if (renormalize) {
    const double mx = *std::max_element(out.pix.begin(), out.pix.end());
    if (mx > 0.0) {
      for (double& v : out.pix) v /= mx;
    }
  }
  return out;
}

enum class NetScale { full, desk };

inline std::string to_string(NetScale s) {
  return s == NetScale::full ? "full" : "desk";
}

inline NetScale scale_from_string(const std::string& name) {
  if (name == "full") return NetScale::full;
  if (name == "desk") return NetScale::desk;
  throw std::invalid_argument("unknown scale: " + name);
}

// Three conv/pool blocks followed by three hidden dense layers and one
// logit. Convs are 3x3 with same padding and ReLU; pooling is 2x2 max with
// ceiling on odd sides.
struct CnnConfig {
  std::size_t input = kImageSide;
  std::array<std::size_t, 3> filters = {32, 64, 128};
  std::array<std::size_t, 3> dense = {256, 128, 64};
  bool operator==(const CnnConfig&) const = default;
};

inline CnnConfig full_scale_config() { return CnnConfig{}; }

inline CnnConfig desk_scale_config() {
  return CnnConfig{32, {8, 16, 32}, {64, 32, 16}};
}

inline CnnConfig config_for_scale(NetScale s) {
  return s == NetScale::full ? full_scale_config() : desk_scale_config();
}

inline constexpr std::size_t kSegmentCount = 14;

// Flat parameter bookkeeping. Segment order: conv1 w/b, conv2 w/b,
// conv3 w/b, dense1 w/b, dense2 w/b, dense3 w/b, out w/b. Even segments are
// kernels, odd segments biases.
struct CnnGeometry {
  std::array<std::size_t, 4> side;
  std::array<std::size_t, 4> channels;
  std::size_t flatten = 0;
  std::array<std::size_t, 4> dense_in;
  std::array<std::size_t, 4> dense_out;
  std::array<std::size_t, kSegmentCount> seg_offset;
  std::array<std::size_t, kSegmentCount> seg_size;
  std::size_t total = 0;
};

inline CnnGeometry cnn_geometry(const CnnConfig& c) {
  CnnGeometry g;
  g.side[0] = c.input;
  for (int b = 0; b < 3; ++b) g.side[b + 1] = (g.side[b] + 1) / 2;
  g.channels = {1, c.filters[0], c.filters[1], c.filters[2]};
  g.flatten = g.side[3] * g.side[3] * c.filters[2];
  g.dense_in = {g.flatten, c.dense[0], c.dense[1], c.dense[2]};
  g.dense_out = {c.dense[0], c.dense[1], c.dense[2], 1};

  std::size_t at = 0;
  for (int b = 0; b < 3; ++b) {
    g.seg_size[2 * b] = 9 * g.channels[b] * g.channels[b + 1];
    g.seg_size[2 * b + 1] = g.channels[b + 1];
  }
  for (int l = 0; l < 4; ++l) {
    g.seg_size[6 + 2 * l] = g.dense_in[l] * g.dense_out[l];
    g.seg_size[7 + 2 * l] = g.dense_out[l];
  }
  for (std::size_t s = 0; s < kSegmentCount; ++s) {
    g.seg_offset[s] = at;
    at += g.seg_size[s];
  }
  g.total = at;
  return g;
}

inline std::size_t param_count(const CnnConfig& c) {
  return cnn_geometry(c).total;
}

struct LayerShape {
  std::string name;
  std::size_t h = 0;
  std::size_t w = 0;
  std::size_t c = 0;
  bool operator==(const LayerShape&) const = default;
};

inline std::vector<LayerShape> shape_chain(const CnnConfig& c) {
  const CnnGeometry g = cnn_geometry(c);
  std::vector<LayerShape> chain;
  for (int b = 0; b < 3; ++b) {
    const std::string tag = std::to_string(b + 1);
    chain.push_back({"conv" + tag, g.side[b], g.side[b], g.channels[b + 1]});
    chain.push_back(
        {"pool" + tag, g.side[b + 1], g.side[b + 1], g.channels[b + 1]});
  }
  chain.push_back({"flatten", 1, 1, g.flatten});
  for (int l = 0; l < 3; ++l) {
    chain.push_back({"dense" + std::to_string(l + 1), 1, 1, g.dense_out[l]});
  }
  chain.push_back({"out", 1, 1, 1});
  return chain;
}

struct CnnParams {
  CnnConfig config;
  std::vector<double> values;
};

// He-normal kernels, zero biases; each segment draws from its own substream.
inline CnnParams init_params(const CnnConfig& config, std::uint64_t seed) {
  const CnnGeometry g = cnn_geometry(config);
  CnnParams p;
  p.config = config;
  p.values.assign(g.total, 0.0);
  RandomStream root(seed);
  for (std::size_t s = 0; s < kSegmentCount; s += 2) {
    std::size_t fan_in = 0;
    if (s < 6) {
      fan_in = 9 * g.channels[s / 2];
    } else {
      fan_in = g.dense_in[(s - 6) / 2];
    }
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    RandomStream sub = root.child(s);
    for (std::size_t k = 0; k < g.seg_size[s]; ++k) {
      p.values[g.seg_offset[s] + k] = stddev * sub.normal();
    }
  }
  return p;
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Numerically stable binary cross entropy on the logit with a real-valued
// target in [0, 1].
inline double bce_with_logits(double z, double y) {
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

namespace detail {

// Activations kept for the backward pass: conv outputs are post-ReLU and
// pooling remembers its winning flat index per pooled cell.
struct CnnTrace {
  std::array<std::vector<double>, 3> conv;
  std::array<std::vector<double>, 3> pool;
  std::array<std::vector<std::size_t>, 3> pool_arg;
  std::array<std::vector<double>, 4> dense;
  double logit = 0.0;
};

inline void conv_forward(const double* in, std::size_t side, std::size_t cin,
                         std::size_t cout, const double* w, const double* b,
                         std::vector<double>& out) {
  out.assign(side * side * cout, 0.0);
  for (std::size_t oy = 0; oy < side; ++oy) {
    for (std::size_t ox = 0; ox < side; ++ox) {
      double* cell = out.data() + (oy * side + ox) * cout;
      for (std::size_t co = 0; co < cout; ++co) cell[co] = b[co];
      for (int ky = 0; ky < 3; ++ky) {
        const long long iy = static_cast<long long>(oy) + ky - 1;
        if (iy < 0 || iy >= static_cast<long long>(side)) continue;
        for (int kx = 0; kx < 3; ++kx) {
          const long long ix = static_cast<long long>(ox) + kx - 1;
          if (ix < 0 || ix >= static_cast<long long>(side)) continue;
          const double* pixel =
              in + (static_cast<std::size_t>(iy) * side +
                    static_cast<std::size_t>(ix)) *
                       cin;
          const double* tap = w + (ky * 3 + kx) * cin * cout;
          for (std::size_t ci = 0; ci < cin; ++ci) {
            const double v = pixel[ci];
            const double* col = tap + ci * cout;
            for (std::size_t co = 0; co < cout; ++co) cell[co] += v * col[co];
          }
        }
      }
      for (std::size_t co = 0; co < cout; ++co) {
        if (cell[co] < 0.0) cell[co] = 0.0;
      }
    }
  }
}

inline void pool_forward(const std::vector<double>& in, std::size_t side,
                         std::size_t channels, std::vector<double>& out,
                         std::vector<std::size_t>& arg) {
  const std::size_t oside = (side + 1) / 2;
  out.assign(oside * oside * channels, 0.0);
  arg.assign(oside * oside * channels, 0);
  for (std::size_t oj = 0; oj < oside; ++oj) {
    for (std::size_t oi = 0; oi < oside; ++oi) {
      const std::size_t j1 = std::min(2 * oj + 1, side - 1);
      const std::size_t i1 = std::min(2 * oi + 1, side - 1);
      for (std::size_t c = 0; c < channels; ++c) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_at = 0;
        for (std::size_t j = 2 * oj; j <= j1; ++j) {
          for (std::size_t i = 2 * oi; i <= i1; ++i) {
            const std::size_t flat = (j * side + i) * channels + c;
            if (in[flat] > best) {
              best = in[flat];
              best_at = flat;
            }
          }
        }
        const std::size_t oflat = (oj * oside + oi) * channels + c;
        out[oflat] = best;
        arg[oflat] = best_at;
      }
    }
  }
}

inline void dense_forward(const std::vector<double>& in, std::size_t nin,
                          std::size_t nout, const double* w, const double* b,
                          bool relu, std::vector<double>& out) {
  out.assign(nout, 0.0);
  for (std::size_t o = 0; o < nout; ++o) out[o] = b[o];
  for (std::size_t i = 0; i < nin; ++i) {
    const double v = in[i];
    if (v == 0.0) continue;
    const double* row = w + i * nout;
    for (std::size_t o = 0; o < nout; ++o) out[o] += v * row[o];
  }
  if (relu) {
    for (double& v : out) {
      if (v < 0.0) v = 0.0;
    }
  }
}

inline void forward_trace(const CnnParams& params, const Image& img,
                          const CnnGeometry& g, CnnTrace& t) {
  if (img.n != params.config.input) {
    throw std::invalid_argument("image side does not match network input");
  }
  if (params.values.size() != g.total) {
    throw std::invalid_argument("parameter vector has the wrong length");
  }
  const double* v = params.values.data();
  const double* in = img.pix.data();
  for (int b = 0; b < 3; ++b) {
    conv_forward(in, g.side[b], g.channels[b], g.channels[b + 1],
                 v + g.seg_offset[2 * b], v + g.seg_offset[2 * b + 1],
                 t.conv[b]);
    pool_forward(t.conv[b], g.side[b], g.channels[b + 1], t.pool[b],
                 t.pool_arg[b]);
    in = t.pool[b].data();
  }
  const std::vector<double>* dense_in = &t.pool[2];
  for (int l = 0; l < 4; ++l) {
    dense_forward(*dense_in, g.dense_in[l], g.dense_out[l],
                  v + g.seg_offset[6 + 2 * l], v + g.seg_offset[7 + 2 * l],
                  l < 3, t.dense[l]);
    dense_in = &t.dense[l];
  }
  t.logit = t.dense[3][0];
}

// Accumulates d(loss)/d(params) into grad given d(loss)/d(logit).
inline void backward(const CnnParams& params, const Image& img,
                     const CnnGeometry& g, const CnnTrace& t, double dlogit,
                     std::vector<double>& grad) {
  const double* v = params.values.data();
  double* gv = grad.data();

  std::vector<double> dcur(1, dlogit);
  for (int l = 3; l >= 0; --l) {
    const std::vector<double>& in =
        l == 0 ? t.pool[2] : t.dense[static_cast<std::size_t>(l - 1)];
    const double* w = v + g.seg_offset[6 + 2 * l];
    double* gw = gv + g.seg_offset[6 + 2 * l];
    double* gb = gv + g.seg_offset[7 + 2 * l];
    if (l < 3) {
      for (std::size_t o = 0; o < g.dense_out[l]; ++o) {
        if (t.dense[l][o] == 0.0) dcur[o] = 0.0;
      }
    }
    std::vector<double> din(g.dense_in[l], 0.0);
    for (std::size_t o = 0; o < g.dense_out[l]; ++o) gb[o] += dcur[o];
    for (std::size_t i = 0; i < g.dense_in[l]; ++i) {
      const double x = in[i];
      const double* row = w + i * g.dense_out[l];
      double* grow = gw + i * g.dense_out[l];
      double acc = 0.0;
      for (std::size_t o = 0; o < g.dense_out[l]; ++o) {
        grow[o] += dcur[o] * x;
        acc += dcur[o] * row[o];
      }
      din[i] = acc;
    }
    dcur = std::move(din);
  }

  for (int b = 2; b >= 0; --b) {
    // dcur currently holds the pooled-layer gradient for block b.
    std::vector<double> dconv(t.conv[b].size(), 0.0);
    for (std::size_t k = 0; k < dcur.size(); ++k) {
      if (dcur[k] == 0.0) continue;
      const std::size_t at = t.pool_arg[b][k];
      if (t.conv[b][at] > 0.0) dconv[at] += dcur[k];
    }

    const std::size_t side = g.side[b];
    const std::size_t cin = g.channels[b];
    const std::size_t cout = g.channels[b + 1];
    const double* in = b == 0 ? img.pix.data() : t.pool[b - 1].data();
    const double* w = v + g.seg_offset[2 * b];
    double* gw = gv + g.seg_offset[2 * b];
    double* gb = gv + g.seg_offset[2 * b + 1];
    std::vector<double> din;
    if (b > 0) din.assign(side * side * cin, 0.0);

    for (std::size_t oy = 0; oy < side; ++oy) {
      for (std::size_t ox = 0; ox < side; ++ox) {
        const double* dcell = dconv.data() + (oy * side + ox) * cout;
        bool any = false;
        for (std::size_t co = 0; co < cout; ++co) {
          if (dcell[co] != 0.0) {
            any = true;
            gb[co] += dcell[co];
          }
        }
        if (!any) continue;
        for (int ky = 0; ky < 3; ++ky) {
          const long long iy = static_cast<long long>(oy) + ky - 1;
          if (iy < 0 || iy >= static_cast<long long>(side)) continue;
          for (int kx = 0; kx < 3; ++kx) {
            const long long ix = static_cast<long long>(ox) + kx - 1;
            if (ix < 0 || ix >= static_cast<long long>(side)) continue;
            const std::size_t pixel_at =
                (static_cast<std::size_t>(iy) * side +
                 static_cast<std::size_t>(ix)) *
                cin;
            const double* tap = w + (ky * 3 + kx) * cin * cout;
            double* gtap = gw + (ky * 3 + kx) * cin * cout;
            for (std::size_t ci = 0; ci < cin; ++ci) {
              const double x = in[pixel_at + ci];
              const double* col = tap + ci * cout;
              double* gcol = gtap + ci * cout;
              double acc = 0.0;
              for (std::size_t co = 0; co < cout; ++co) {
                gcol[co] += dcell[co] * x;
                acc += dcell[co] * col[co];
              }
              if (b > 0) din[pixel_at + ci] += acc;
            }
          }
        }
      }
    }
    dcur = std::move(din);
  }
}

}  // namespace detail

inline double forward(const CnnParams& params, const Image& img) {
  const CnnGeometry g = cnn_geometry(params.config);
  detail::CnnTrace t;
  detail::forward_trace(params, img, g, t);
  return sigmoid(t.logit);
}

// Label is a real target in [0, 1]; generated pairs use 1 for x -> y.
struct LabeledImage {
  Image image;
  double label = 0.0;
};

struct TrainConfig {
  double alpha = 1e-4;
  double lambda = 0.01;
  std::size_t batch = 16;
  std::size_t epochs = 10;
  double blur_sigma = 0.5;
  std::uint64_t seed = 0;
  NetScale scale = NetScale::full;
  double val_fraction = 0.2;

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (blur_sigma < 0.0) {
      throw std::invalid_argument("blur_sigma must be nonnegative");
    }
    if (batch == 0) throw std::invalid_argument("batch must be positive");
    if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
      throw std::invalid_argument("val_fraction must lie in (0, 1)");
    }
  }
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long long t = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

namespace detail {

inline double decay_term(const CnnParams& params, const CnnGeometry& g,
                         double lambda) {
  if (lambda == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t s = 0; s < kSegmentCount; s += 2) {
    const double* w = params.values.data() + g.seg_offset[s];
    for (std::size_t k = 0; k < g.seg_size[s]; ++k) sum += w[k] * w[k];
  }
  return lambda * sum;
}

// Mean BCE plus the kernel decay term, with the gradient written to grad.
inline double batch_loss_and_gradient(const CnnParams& params,
                                      const std::vector<LabeledImage>& batch,
                                      double lambda, const CnnGeometry& g,
                                      std::vector<double>& grad) {
  grad.assign(g.total, 0.0);
  CnnTrace trace;
  double loss = 0.0;
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (const LabeledImage& item : batch) {
    forward_trace(params, item.image, g, trace);
    loss += bce_with_logits(trace.logit, item.label) * inv;
    const double dlogit = (sigmoid(trace.logit) - item.label) * inv;
    backward(params, item.image, g, trace, dlogit, grad);
  }
  if (lambda > 0.0) {
    for (std::size_t s = 0; s < kSegmentCount; s += 2) {
      const double* w = params.values.data() + g.seg_offset[s];
      double* gw = grad.data() + g.seg_offset[s];
      for (std::size_t k = 0; k < g.seg_size[s]; ++k) {
        gw[k] += 2.0 * lambda * w[k];
      }
    }
    loss += decay_term(params, g, lambda);
  }
  return loss;
}

}  // namespace detail

// One Adam update over a batch. State must persist across calls; it is
// (re)sized on first use.
inline double train_step(CnnParams& params,
                         const std::vector<LabeledImage>& batch,
                         const TrainConfig& config, AdamState& state) {
  if (batch.empty()) throw std::invalid_argument("batch must be nonempty");
  config.validate();
  const CnnGeometry g = cnn_geometry(params.config);
  if (state.m.size() != g.total) {
    state.m.assign(g.total, 0.0);
    state.v.assign(g.total, 0.0);
    state.t = 0;
  }

  std::vector<double> grad;
  const double loss =
      detail::batch_loss_and_gradient(params, batch, config.lambda, g, grad);
  if (!std::isfinite(loss)) {
    throw TrainingDivergedError("non-finite training loss");
  }

  state.t += 1;
  const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < g.total; ++k) {
    state.m[k] = kAdamBeta1 * state.m[k] + (1.0 - kAdamBeta1) * grad[k];
    state.v[k] = kAdamBeta2 * state.v[k] + (1.0 - kAdamBeta2) * grad[k] * grad[k];
    const double mhat = state.m[k] / c1;
    const double vhat = state.v[k] / c2;
    params.values[k] -= config.alpha * mhat / (std::sqrt(vhat) + kAdamEpsilon);
  }
  return loss;
}

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_auroc = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_auroc = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  CnnParams params;
  std::vector<EpochStats> history;
};

namespace detail {

struct SplitEval {
  double loss = 0.0;
  double auroc = 0.0;
  double accuracy = 0.0;
};

inline SplitEval evaluate_split(const CnnParams& params,
                                const std::vector<LabeledImage>& data,
                                const std::vector<std::size_t>& idx,
                                const CnnGeometry& g) {
  SplitEval out;
  CnnTrace trace;
  std::vector<LabeledScore> scores;
  std::vector<DecisionRecord> decisions;
  scores.reserve(idx.size());
  decisions.reserve(idx.size());
  for (std::size_t i : idx) {
    forward_trace(params, data[i].image, g, trace);
    const double p = sigmoid(trace.logit);
    out.loss += bce_with_logits(trace.logit, data[i].label);
    const Direction truth =
        data[i].label >= 0.5 ? Direction::x_to_y : Direction::y_to_x;
    scores.push_back({p, truth, 1.0});
    decisions.push_back(
        {p >= 0.5 ? Direction::x_to_y : Direction::y_to_x, truth, 1.0});
  }
  out.loss /= static_cast<double>(idx.size());
  out.auroc = auroc(scores);
  out.accuracy = accuracy(decisions);
  return out;
}

}  // namespace detail

// Full training loop: stratified validation split, blur on training images
// only, seeded shuffling, one history row before training and one per epoch.
inline TrainResult train(const std::vector<LabeledImage>& data,
                         const TrainConfig& config) {
  config.validate();
  const CnnConfig net = config_for_scale(config.scale);
  const CnnGeometry g = cnn_geometry(net);
  RandomStream root(config.seed);

  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (data[i].label >= 0.5 ? pos : neg).push_back(i);
  }
  auto shuffle_ids = [](std::vector<std::size_t>& ids, RandomStream rng) {
    for (std::size_t i = ids.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<long long>(i) - 1));
      std::swap(ids[i - 1], ids[j]);
    }
  };
  shuffle_ids(pos, root.child(1));
  shuffle_ids(neg, root.child(2));

  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;
  for (const std::vector<std::size_t>* cls : {&pos, &neg}) {
    const auto k = static_cast<std::size_t>(
        std::llround(config.val_fraction * static_cast<double>(cls->size())));
    if (k == 0 || k >= cls->size()) {
      throw std::invalid_argument(
          "each label class needs at least one training and one "
          "validation example");
    }
    val_idx.insert(val_idx.end(), cls->begin(), cls->begin() + k);
    train_idx.insert(train_idx.end(), cls->begin() + k, cls->end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());

  // Augmented copies for training; validation sees the raw images.
  std::vector<LabeledImage> blurred(data.size());
  for (std::size_t i : train_idx) {
    blurred[i] = {gaussian_blur(data[i].image, config.blur_sigma),
                  data[i].label};
  }
  for (std::size_t i : val_idx) blurred[i] = data[i];

  TrainResult result;
  result.params = init_params(net, root.child(3).seed());
  AdamState state;

  auto record = [&](std::size_t epoch) {
    const detail::SplitEval tr =
        detail::evaluate_split(result.params, blurred, train_idx, g);
    const detail::SplitEval va =
        detail::evaluate_split(result.params, blurred, val_idx, g);
    result.history.push_back({epoch, tr.loss, tr.auroc, tr.accuracy, va.loss,
                              va.auroc, va.accuracy});
  };
  record(0);

  std::vector<std::size_t> order = train_idx;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_ids(order, root.child(16).child(epoch));
    for (std::size_t at = 0; at < order.size(); at += config.batch) {
      const std::size_t hi = std::min(at + config.batch, order.size());
      std::vector<LabeledImage> batch;
      batch.reserve(hi - at);
      for (std::size_t k = at; k < hi; ++k) batch.push_back(blurred[order[k]]);
      train_step(result.params, batch, config, state);
    }
    record(epoch);
  }
  return result;
}

// Keeps points whose absolute deviation from the median stays within the
// 90th percentile, per coordinate; a point leaves if either coordinate
// exceeds its threshold.
inline std::pair<std::vector<double>, std::vector<double>> filter_outliers(
    const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw std::invalid_argument("filter needs equal-length nonempty vectors");
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  auto deviations = [&](const std::vector<double>& v, double med) {
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = std::abs(v[i] - med);
    return d;
  };
  const double mx = median(xs);
  const double my = median(ys);
  const std::vector<double> dx = deviations(xs, mx);
  const std::vector<double> dy = deviations(ys, my);
  auto percentile90 = [](std::vector<double> d) {
    std::sort(d.begin(), d.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(0.9 * static_cast<double>(d.size())));
    return d[std::max<std::size_t>(rank, 1) - 1];
  };
  const double tx = percentile90(dx);
  const double ty = percentile90(dy);

  std::pair<std::vector<double>, std::vector<double>> kept;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (dx[i] <= tx && dy[i] <= ty) {
      kept.first.push_back(xs[i]);
      kept.second.push_back(ys[i]);
    }
  }
  return kept;
}

inline double asymmetry_from_probs(double p_xy, double p_yx) {
  if (!(p_xy >= 0.0) || !(p_yx >= 0.0) || p_xy + p_yx <= 0.0) {
    throw std::invalid_argument("probabilities must be nonnegative");
  }
  return (p_xy - p_yx) / (p_xy + p_yx);
}

// Classifier-based direction score in [-1, 1]: positive means the network
// prefers the (x, y) rendering over the swapped one.
inline double asymmetry_score(const CnnParams& params,
                              const std::vector<double>& xs,
                              const std::vector<double>& ys) {
  const auto [fx, fy] = filter_outliers(xs, ys);
  if (fx.size() < 5) {
    throw InsufficientDataError("fewer than 5 points after outlier removal");
  }
  const std::vector<double> sx = unit_scale(fx);
  const std::vector<double> sy = unit_scale(fy);
  const double p_xy =
      forward(params, rasterize(sx, sy, params.config.input));
  const double p_yx =
      forward(params, rasterize(sy, sx, params.config.input));
  return asymmetry_from_probs(p_xy, p_yx);
}

}  // namespace exchpairs
