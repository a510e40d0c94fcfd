// SPDX-License-Identifier: Apache-2.0
#include "etcid/bench/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <system_error>

#include "etcid/cipher/keys.hpp"
#include "etcid/error.hpp"
#include "etcid/image/pnm.hpp"

namespace etcid::bench {
namespace {

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return static_cast<double>(rng_.next() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  cipher::Xoshiro256StarStar rng_;
};

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Bilinearly interpolated lattice noise, values in [-1, 1].
class ValueNoise {
 public:
  ValueNoise(Uniform& u, int cells_x, int cells_y) : cx_(cells_x), cy_(cells_y) {
    lattice_.resize(static_cast<std::size_t>(cx_ + 1) * (cy_ + 1));
    for (auto& v : lattice_) v = u(-1.0, 1.0);
  }

  double at(double fx, double fy) const {  // fx, fy in [0, 1]
    const double gx = fx * cx_, gy = fy * cy_;
    const int ix = std::min(static_cast<int>(gx), cx_ - 1);
    const int iy = std::min(static_cast<int>(gy), cy_ - 1);
    const double tx = smoothstep(gx - ix), ty = smoothstep(gy - iy);
    auto l = [&](int x, int y) { return lattice_[static_cast<std::size_t>(y) * (cx_ + 1) + x]; };
    const double top = l(ix, iy) + (l(ix + 1, iy) - l(ix, iy)) * tx;
    const double bottom = l(ix, iy + 1) + (l(ix + 1, iy + 1) - l(ix, iy + 1)) * tx;
    return top + (bottom - top) * ty;
  }

 private:
  int cx_, cy_;
  std::vector<double> lattice_;
};

PixelImage synthesize_one(std::uint64_t seed, int width, int height) {
  Uniform u(seed);
  const double aspect = static_cast<double>(width) / height;

  // Luminance: fractal noise with a random spectral slope.
  const int octaves = 5;
  const int base_cells = 2 + static_cast<int>(u() * 4);
  const double persistence = u(0.35, 0.65);
  std::vector<ValueNoise> lum;
  for (int o = 0; o < octaves; ++o) {
    const int cells = base_cells << o;
    lum.emplace_back(u, std::max(1, static_cast<int>(cells * aspect)), cells);
  }
  const ValueNoise hue_a(u, 3, 2), hue_b(u, 3, 2);

  const double mean = u(50.0, 205.0);
  const double contrast = u(40.0, 110.0);
  const double grad_x = u(-60.0, 60.0), grad_y = u(-60.0, 60.0);
  double tint[3], tint_a[3], tint_b[3];
  for (int c = 0; c < 3; ++c) {
    tint[c] = u(-30.0, 30.0);
    tint_a[c] = u(-35.0, 35.0);
    tint_b[c] = u(-35.0, 35.0);
  }

  struct Shape {
    double cx, cy, rx, ry, softness;
    double color[3];
    bool ellipse;
  };
  std::vector<Shape> shapes(4 + static_cast<int>(u() * 12));
  for (auto& s : shapes) {
    s.cx = u();
    s.cy = u();
    s.rx = u(0.03, 0.25);
    s.ry = u(0.03, 0.25);
    s.softness = u(0.005, 0.05);
    for (double& c : s.color) c = u(0.0, 255.0);
    s.ellipse = u() < 0.6;
  }

  const double grain_sigma = u(1.0, 3.0);
  PixelImage img(width, height, 3);
  std::vector<double> px(3);
  for (int y = 0; y < height; ++y) {
    const double fy = (y + 0.5) / height;
    for (int x = 0; x < width; ++x) {
      const double fx = (x + 0.5) / width;
      double n = 0.0, amp = 1.0;
      for (const auto& layer : lum) {
        n += amp * layer.at(fx, fy);
        amp *= persistence;
      }
      const double l = mean + contrast * n + grad_x * (fx - 0.5) + grad_y * (fy - 0.5);
      const double a = hue_a.at(fx, fy), b = hue_b.at(fx, fy);
      for (int c = 0; c < 3; ++c) px[c] = l + tint[c] + tint_a[c] * a + tint_b[c] * b;
      for (const auto& s : shapes) {
        const double dx = (fx - s.cx) / s.rx, dy = (fy - s.cy) / s.ry;
        const double dist = s.ellipse ? std::sqrt(dx * dx + dy * dy) : std::max(std::abs(dx), std::abs(dy));
        const double edge = (1.0 - dist) * std::min(s.rx, s.ry) / s.softness;
        const double alpha = std::clamp(edge, 0.0, 1.0);
        if (alpha > 0.0) {
          for (int c = 0; c < 3; ++c) px[c] = px[c] * (1.0 - alpha) + s.color[c] * alpha;
        }
      }
      for (int c = 0; c < 3; ++c) {
        // soft highlight/shadow roll-off, then sensor-like grain
        const double toned = 127.5 + 127.5 * std::tanh((px[c] - 127.5) / 127.5);
        const double grain = grain_sigma * 2.0 * (u() + u() + u() - 1.5);
        img.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(toned + grain), 0L, 255L));
      }
    }
  }
  return img;
}

bool is_image_file(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".jpg" || ext == ".jpeg" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

}  // namespace

std::vector<CorpusImage> synthesize_corpus(std::size_t count, std::uint64_t seed, int width, int height) {
  std::vector<CorpusImage> out;
  out.reserve(count);
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t image_seed = cipher::splitmix64_next(state);
    out.push_back({"synth_" + std::to_string(i), synthesize_one(image_seed, width, height)});
  }
  return out;
}

std::vector<CorpusImage> load_corpus(const std::filesystem::path& dir, std::size_t count) {
  std::error_code ec;
  std::vector<std::filesystem::path> files;
  for (std::filesystem::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && is_image_file(it->path())) files.push_back(it->path());
  }
  if (ec) throw Error(ErrorKind::kIo, "cannot read corpus directory " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());
  if (files.size() < count) {
    throw Error(ErrorKind::kIo, "corpus " + dir.string() + " holds " + std::to_string(files.size()) +
                                    " images, " + std::to_string(count) + " requested");
  }
  std::vector<CorpusImage> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({files[i].filename().string(), crop_to_blocks(load_image(files[i]))});
  }
  return out;
}

}  // namespace etcid::bench
