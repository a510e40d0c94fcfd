// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <unistd.h>

#include "etcid/image/pixel_image.hpp"
#include "etcid/jpeg/codec.hpp"

namespace etcid::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(ETCID_FIXTURE_DIR) / name;
}

inline std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

inline PixelImage random_image(int w, int h, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, 255);
  PixelImage img(w, h, channels);
  for (auto& s : img.samples()) s = static_cast<std::uint8_t>(dist(rng));
  return img;
}

// Smooth image with some texture, closer to photographs than white noise.
inline PixelImage smooth_image(int w, int h, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double fx = 0.01 + 0.05 * u(rng), fy = 0.01 + 0.05 * u(rng), ph = 6.28 * u(rng);
  std::normal_distribution<double> noise(0.0, 4.0);
  PixelImage img(w, h, channels);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        const double v = 128 + 90 * std::sin(fx * x + ph + c) * std::cos(fy * y - c) + noise(rng);
        img.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return img;
}

inline double mean_abs_error(const PixelImage& a, const PixelImage& b) {
  double sum = 0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) sum += std::abs(int(a.samples()[i]) - int(b.samples()[i]));
  return sum / static_cast<double>(a.samples().size());
}

struct ScopedTempDir {
  std::filesystem::path path;
  ScopedTempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("etcid_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~ScopedTempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

// --- libjpeg oracle ----------------------------------------------------------

namespace detail {
inline void throw_on_error(j_common_ptr cinfo) {
  char msg[JMSG_LENGTH_MAX];
  (*cinfo->err->format_message)(cinfo, msg);
  throw std::runtime_error(msg);
}
}  // namespace detail

inline PixelImage libjpeg_decode(const std::vector<std::uint8_t>& bytes) {
  jpeg_decompress_struct d{};
  jpeg_error_mgr err{};
  d.err = jpeg_std_error(&err);
  err.error_exit = detail::throw_on_error;
  jpeg_create_decompress(&d);
  try {
    jpeg_mem_src(&d, const_cast<unsigned char*>(bytes.data()), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&d, TRUE);
    d.dct_method = JDCT_ISLOW;
    jpeg_start_decompress(&d);
    PixelImage img(static_cast<int>(d.output_width), static_cast<int>(d.output_height), d.output_components);
    while (d.output_scanline < d.output_height) {
      JSAMPROW row = img.row(static_cast<int>(d.output_scanline)).data();
      jpeg_read_scanlines(&d, &row, 1);
    }
    jpeg_finish_decompress(&d);
    jpeg_destroy_decompress(&d);
    return img;
  } catch (...) {
    jpeg_destroy_decompress(&d);
    throw;
  }
}

// Quantization tables libjpeg derives for a quality factor (natural order).
inline std::vector<jpeg::QuantTable> libjpeg_quant_tables(int qf) {
  jpeg_compress_struct c{};
  jpeg_error_mgr err{};
  c.err = jpeg_std_error(&err);
  err.error_exit = detail::throw_on_error;
  jpeg_create_compress(&c);
  c.in_color_space = JCS_RGB;
  c.input_components = 3;
  jpeg_set_defaults(&c);
  jpeg_set_quality(&c, qf, TRUE);
  std::vector<jpeg::QuantTable> out;
  for (int t = 0; t < 2; ++t) {
    jpeg::QuantTable q{};
    for (int k = 0; k < 64; ++k) q[k] = c.quant_tbl_ptrs[t]->quantval[k];
    out.push_back(q);
  }
  jpeg_destroy_compress(&c);
  return out;
}

}  // namespace etcid::test
