#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "exchpairs/error.hpp"
#include "exchpairs/rng.hpp"
#include "exchpairs/synthnn.hpp"

namespace {

using namespace exchpairs;

Image random_image(RandomStream& rng, std::size_t side, std::size_t points) {
  std::vector<double> xs(points);
  std::vector<double> ys(points);
  for (std::size_t i = 0; i < points; ++i) {
    xs[i] = rng.uniform01();
    ys[i] = rng.uniform01();
  }
  return rasterize(xs, ys, side);
}

}  // namespace

TEST_CASE("rasterize places corner and center pixels", "[synthnn]") {
  const Image img = rasterize({0.0, 1.0}, {0.0, 1.0});
  CHECK(img.n == 50);
  CHECK(img.at(0, 0) == 1.0);
  CHECK(img.at(49, 49) == 1.0);
  CHECK(std::accumulate(img.pix.begin(), img.pix.end(), 0.0) == 2.0);

  const Image center = rasterize({0.5}, {0.5});
  CHECK(center.at(24, 24) == 1.0);
  CHECK(std::accumulate(center.pix.begin(), center.pix.end(), 0.0) == 1.0);
}

TEST_CASE("rasterize is idempotent over duplicates", "[synthnn]") {
  const Image once = rasterize({0.3, 0.8}, {0.6, 0.1});
  const Image thrice =
      rasterize({0.3, 0.8, 0.3, 0.3}, {0.6, 0.1, 0.6, 0.6});
  CHECK(once == thrice);
}

TEST_CASE("rasterize validates input", "[synthnn]") {
  CHECK_THROWS_AS(rasterize({-0.1}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(rasterize({0.5}, {1.1}), std::invalid_argument);
  CHECK_THROWS_AS(rasterize({0.5, 0.6}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(rasterize({0.5}, {0.5}, 1), std::invalid_argument);
}

TEST_CASE("rasterize after scaling ignores exact affine maps", "[synthnn]") {
  RandomStream rng(5);
  std::vector<double> xs(40);
  std::vector<double> ys(40);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = rng.uniform01();
    ys[i] = rng.uniform01();
  }
  std::vector<double> mapped(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) mapped[i] = 2.0 * xs[i] + 1.0;

  const Image base = rasterize(unit_scale(xs), unit_scale(ys));
  const Image moved = rasterize(unit_scale(mapped), unit_scale(ys));
  CHECK(base == moved);
}

TEST_CASE("blur with zero sigma is the identity", "[synthnn]") {
  RandomStream rng(7);
  const Image img = random_image(rng, 20, 30);
  CHECK(gaussian_blur(img, 0.0) == img);
}

TEST_CASE("blur preserves mass and symmetry on a center pixel", "[synthnn]") {
  Image img(21);
  img.at(10, 10) = 1.0;
  const Image raw = gaussian_blur(img, 0.5, false);

  const double mass = std::accumulate(raw.pix.begin(), raw.pix.end(), 0.0);
  CHECK(mass == Catch::Approx(1.0).margin(1e-6));
  for (std::size_t k = 1; k <= 2; ++k) {
    CHECK(raw.at(10, 10 + k) == Catch::Approx(raw.at(10, 10 - k)).margin(1e-15));
    CHECK(raw.at(10 + k, 10) == Catch::Approx(raw.at(10, 10 + k)).margin(1e-15));
  }

  const Image scaled = gaussian_blur(img, 0.5);
  CHECK(*std::max_element(scaled.pix.begin(), scaled.pix.end()) == 1.0);
}

namespace {

std::vector<double> sampled_gaussian(double sigma) {
  const auto radius = static_cast<long long>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (long long i = -radius; i <= radius; ++i) {
    const double v =
        std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

std::size_t reflect(long long idx, long long n) {
  while (idx < 0 || idx >= n) {
    if (idx < 0) idx = -idx - 1;
    if (idx >= n) idx = 2 * n - idx - 1;
  }
  return static_cast<std::size_t>(idx);
}

}  // namespace

TEST_CASE("blurring twice approximates one wider blur", "[synthnn]") {
  // Sampled truncated kernels only compose once sigma is comfortably above
  // the pixel pitch; at sigma 0.5 the 5-tap kernel deviates by ~0.09.
  Image img(21);
  img.at(10, 10) = 1.0;
  img.at(8, 12) = 1.0;
  const Image twice =
      gaussian_blur(gaussian_blur(img, 1.0, false), 1.0, false);
  const Image wide = gaussian_blur(img, std::sqrt(2.0), false);
  for (std::size_t k = 0; k < twice.pix.size(); ++k) {
    CHECK(std::abs(twice.pix[k] - wide.pix[k]) < 2e-3);
  }
}

TEST_CASE("impulse response is the outer product of gaussian taps",
          "[synthnn]") {
  Image img(21);
  img.at(10, 10) = 1.0;
  const Image raw = gaussian_blur(img, 0.5, false);
  const std::vector<double> k = sampled_gaussian(0.5);
  const long long r = (static_cast<long long>(k.size()) - 1) / 2;
  for (long long dj = -r; dj <= r; ++dj) {
    for (long long di = -r; di <= r; ++di) {
      const double want = k[static_cast<std::size_t>(dj + r)] *
                          k[static_cast<std::size_t>(di + r)];
      CHECK(raw.at(static_cast<std::size_t>(10 + dj),
                   static_cast<std::size_t>(10 + di)) ==
            Catch::Approx(want).margin(1e-15));
    }
  }
}

TEST_CASE("separable blur matches a direct 2d convolution", "[synthnn]") {
  RandomStream rng(41);
  const Image img = random_image(rng, 20, 120);
  const double sigma = 0.8;
  const Image fast = gaussian_blur(img, sigma, false);

  const std::vector<double> k = sampled_gaussian(sigma);
  const long long r = (static_cast<long long>(k.size()) - 1) / 2;
  const auto n = static_cast<long long>(img.n);
  Image slow(img.n);
  for (long long j = 0; j < n; ++j) {
    for (long long i = 0; i < n; ++i) {
      double acc = 0.0;
      for (long long dj = -r; dj <= r; ++dj) {
        for (long long di = -r; di <= r; ++di) {
          acc += k[static_cast<std::size_t>(dj + r)] *
                 k[static_cast<std::size_t>(di + r)] *
                 img.pix[reflect(j + dj, n) * img.n + reflect(i + di, n)];
        }
      }
      slow.at(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = acc;
    }
  }
  for (std::size_t p = 0; p < fast.pix.size(); ++p) {
    CHECK(fast.pix[p] == Catch::Approx(slow.pix[p]).margin(1e-12));
  }
}

TEST_CASE("parameter counts match both scales", "[synthnn]") {
  CHECK(param_count(full_scale_config()) == 1739777);
  CHECK(param_count(desk_scale_config()) == 41345);

  const CnnGeometry g = cnn_geometry(full_scale_config());
  CHECK(g.seg_size[0] + g.seg_size[1] == 320);
  CHECK(g.seg_size[2] + g.seg_size[3] == 18496);
  CHECK(g.seg_size[4] + g.seg_size[5] == 73856);
  CHECK(g.seg_size[6] + g.seg_size[7] == 1605888);
  CHECK(g.seg_size[8] + g.seg_size[9] == 32896);
  CHECK(g.seg_size[10] + g.seg_size[11] == 8256);
  CHECK(g.seg_size[12] + g.seg_size[13] == 65);
}

TEST_CASE("shape chain walks the expected sides", "[synthnn]") {
  const std::vector<LayerShape> chain = shape_chain(full_scale_config());
  const std::vector<LayerShape> expected = {
      {"conv1", 50, 50, 32}, {"pool1", 25, 25, 32}, {"conv2", 25, 25, 64},
      {"pool2", 13, 13, 64}, {"conv3", 13, 13, 128}, {"pool3", 7, 7, 128},
      {"flatten", 1, 1, 6272}, {"dense1", 1, 1, 256}, {"dense2", 1, 1, 128},
      {"dense3", 1, 1, 64},  {"out", 1, 1, 1},
  };
  CHECK(chain == expected);
}

TEST_CASE("forward with zero parameters gives one half", "[synthnn]") {
  const CnnConfig cfg = desk_scale_config();
  CnnParams params;
  params.config = cfg;
  params.values.assign(param_count(cfg), 0.0);
  RandomStream rng(11);
  const Image img = random_image(rng, cfg.input, 60);
  CHECK(forward(params, img) == 0.5);
}

TEST_CASE("forward output stays strictly inside (0,1)", "[synthnn]") {
  const CnnConfig cfg = desk_scale_config();
  RandomStream rng(13);
  const CnnParams params = init_params(cfg, 99);
  for (int rep = 0; rep < 5; ++rep) {
    const Image img = random_image(rng, cfg.input, 40);
    const double p = forward(params, img);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
}

TEST_CASE("forward validates shapes", "[synthnn]") {
  const CnnConfig cfg = desk_scale_config();
  CnnParams params = init_params(cfg, 1);
  RandomStream rng(17);
  CHECK_THROWS_AS(forward(params, random_image(rng, 16, 10)),
                  std::invalid_argument);
  params.values.pop_back();
  CHECK_THROWS_AS(forward(params, random_image(rng, cfg.input, 10)),
                  std::invalid_argument);
}

TEST_CASE("analytic gradient matches central differences", "[synthnn]") {
  CnnConfig cfg = desk_scale_config();
  cfg.input = 8;
  const CnnGeometry g = cnn_geometry(cfg);
  CnnParams params = init_params(cfg, 2024);

  RandomStream rng(31);
  std::vector<LabeledImage> batch;
  for (int k = 0; k < 3; ++k) {
    batch.push_back({random_image(rng, 8, 12), k % 2 == 0 ? 1.0 : 0.0});
  }
  const double lambda = 0.01;

  std::vector<double> grad;
  detail::batch_loss_and_gradient(params, batch, lambda, g, grad);

  auto loss_at = [&](const std::vector<double>& values) {
    CnnParams probe = params;
    probe.values = values;
    std::vector<double> scratch;
    return detail::batch_loss_and_gradient(probe, batch, lambda, g, scratch);
  };

  const double h = 1e-4;
  int checked = 0;
  int attempts = 0;
  while (checked < 100 && attempts < 10000) {
    ++attempts;
    const auto idx = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<long long>(g.total) - 1));
    if (std::abs(grad[idx]) < 1e-4) continue;
    std::vector<double> bumped = params.values;
    bumped[idx] += h;
    const double up = loss_at(bumped);
    bumped[idx] -= 2.0 * h;
    const double down = loss_at(bumped);
    const double fd = (up - down) / (2.0 * h);
    const double rel =
        std::abs(fd - grad[idx]) / std::max(std::abs(fd), std::abs(grad[idx]));
    CHECK(rel < 1e-3);
    ++checked;
  }
  REQUIRE(checked == 100);
}

TEST_CASE("zero-gradient batches leave parameters untouched", "[synthnn]") {
  CnnConfig cfg = desk_scale_config();
  cfg.input = 8;
  CnnParams params;
  params.config = cfg;
  params.values.assign(param_count(cfg), 0.0);

  RandomStream rng(41);
  std::vector<LabeledImage> batch;
  batch.push_back({random_image(rng, 8, 10), 0.5});
  batch.push_back({random_image(rng, 8, 10), 0.5});

  TrainConfig tc;
  tc.lambda = 0.0;
  AdamState state;
  const double first = train_step(params, batch, tc, state);
  const double second = train_step(params, batch, tc, state);
  CHECK(first == Catch::Approx(std::log(2.0)).margin(1e-15));
  CHECK(std::abs(first - second) < 1e-9);
  for (double v : params.values) CHECK(v == 0.0);
}

TEST_CASE("train_step replays bit for bit", "[synthnn]") {
  CnnConfig cfg = desk_scale_config();
  cfg.input = 8;
  RandomStream rng(43);
  std::vector<LabeledImage> batch;
  for (int k = 0; k < 4; ++k) {
    batch.push_back({random_image(rng, 8, 15), k % 2 == 0 ? 1.0 : 0.0});
  }
  TrainConfig tc;

  CnnParams a = init_params(cfg, 7);
  CnnParams b = a;
  AdamState sa;
  AdamState sb;
  const double la = train_step(a, batch, tc, sa);
  const double lb = train_step(b, batch, tc, sb);
  CHECK(la == lb);
  CHECK(a.values == b.values);
}

TEST_CASE("bce equals label entropy at matched predictions", "[synthnn]") {
  const double q = 0.3;
  const double z = std::log(q / (1.0 - q));
  const double mean_bce = q * bce_with_logits(z, 1.0) +
                          (1.0 - q) * bce_with_logits(z, 0.0);
  const double entropy = -(q * std::log(q) + (1.0 - q) * std::log(1.0 - q));
  CHECK(mean_bce == Catch::Approx(entropy).margin(1e-9));

  CnnConfig cfg = desk_scale_config();
  cfg.input = 8;
  CnnParams params;
  params.config = cfg;
  params.values.assign(param_count(cfg), 0.0);
  RandomStream rng(47);
  std::vector<LabeledImage> batch;
  for (int k = 0; k < 4; ++k) {
    batch.push_back({random_image(rng, 8, 10), k % 2 == 0 ? 1.0 : 0.0});
  }
  TrainConfig tc;
  tc.lambda = 0.0;
  AdamState state;
  CHECK(train_step(params, batch, tc, state) ==
        Catch::Approx(std::log(2.0)).margin(1e-12));
}

namespace {

// Desk-scale toy corpus: label 1 draws y increasing in x, label 0 the swap.
std::vector<LabeledImage> toy_corpus(std::size_t count, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<LabeledImage> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    RandomStream sub = rng.child(k);
    std::vector<double> xs(60);
    std::vector<double> ys(60);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = sub.uniform01();
      ys[i] = std::min(1.0, std::max(0.0, xs[i] * xs[i] +
                                              0.05 * sub.normal()));
    }
    if (k % 2 == 0) {
      out.push_back({rasterize(xs, ys, 32), 1.0});
    } else {
      out.push_back({rasterize(ys, xs, 32), 0.0});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("training loss falls on a small corpus", "[synthnn]") {
  TrainConfig tc;
  tc.scale = NetScale::desk;
  tc.epochs = 5;
  tc.seed = 3;
  const TrainResult result = train(toy_corpus(200, 515), tc);

  REQUIRE(result.history.size() == 6);
  for (std::size_t e = 0; e < result.history.size(); ++e) {
    CHECK(result.history[e].epoch == e);
  }
  const double initial = result.history.front().train_loss;
  const double final_loss = result.history.back().train_loss;
  CHECK(final_loss < 0.8 * initial);
}

TEST_CASE("training history replays exactly", "[synthnn]") {
  TrainConfig tc;
  tc.scale = NetScale::desk;
  tc.epochs = 2;
  tc.seed = 9;
  const std::vector<LabeledImage> corpus = toy_corpus(60, 21);
  const TrainResult a = train(corpus, tc);
  const TrainResult b = train(corpus, tc);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t e = 0; e < a.history.size(); ++e) {
    CHECK(a.history[e].train_loss == b.history[e].train_loss);
    CHECK(a.history[e].val_loss == b.history[e].val_loss);
    CHECK(a.history[e].val_auroc == b.history[e].val_auroc);
  }
  CHECK(a.params.values == b.params.values);
}

TEST_CASE("outlier filter drops extreme points only", "[synthnn]") {
  std::vector<double> xs = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 50.0};
  std::vector<double> ys = {0.2, 0.3, 0.1, 0.5, 0.4, 0.6, 0.8, 0.7, 0.9, 0.5};
  const auto [fx, fy] = filter_outliers(xs, ys);
  CHECK(fx.size() == 9);
  CHECK(std::find(fx.begin(), fx.end(), 50.0) == fx.end());

  // Swapping coordinates keeps the same survivors.
  const auto [gy, gx] = filter_outliers(ys, xs);
  CHECK(gx == fx);
  CHECK(gy == fy);
}

TEST_CASE("asymmetry score formula and bounds", "[synthnn]") {
  CHECK(asymmetry_from_probs(0.8, 0.2) == Catch::Approx(0.6).margin(1e-12));
  CHECK(asymmetry_from_probs(0.55, 0.55) == 0.0);
  CHECK(asymmetry_from_probs(1.0, 0.0) == 1.0);
  CHECK_THROWS_AS(asymmetry_from_probs(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("asymmetry score is exactly antisymmetric", "[synthnn]") {
  const CnnConfig cfg = desk_scale_config();
  const CnnParams params = init_params(cfg, 55);
  RandomStream rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    RandomStream sub = rng.child(static_cast<std::uint64_t>(rep));
    std::vector<double> xs(40);
    std::vector<double> ys(40);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = sub.normal();
      ys[i] = 0.5 * xs[i] + sub.normal();
    }
    const double fwd = asymmetry_score(params, xs, ys);
    const double rev = asymmetry_score(params, ys, xs);
    CHECK(fwd == -rev);
    CHECK(fwd >= -1.0);
    CHECK(fwd <= 1.0);
  }
}

TEST_CASE("asymmetry score needs five surviving points", "[synthnn]") {
  const CnnParams params = init_params(desk_scale_config(), 3);
  CHECK_THROWS_AS(
      asymmetry_score(params, {0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1}),
      InsufficientDataError);
}
