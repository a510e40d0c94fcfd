// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>

#include "etcid/error.hpp"
#include "etcid/jpeg/codec.hpp"
#include "etcid/simd/kernels.hpp"
#include "tables.hpp"

namespace etcid::jpeg {
namespace {

using detail::HuffmanSpec;

struct HuffmanCode {
  std::uint16_t code = 0;
  std::uint8_t length = 0;
};

// Canonical code assignment (Annex C).
std::array<HuffmanCode, 256> build_codes(const HuffmanSpec& spec) {
  std::array<HuffmanCode, 256> table{};
  std::uint16_t code = 0;
  std::size_t k = 0;
  for (int len = 1; len <= 16; ++len) {
    for (int i = 0; i < spec.counts[len - 1]; ++i) {
      table[spec.symbols[k++]] = {code, static_cast<std::uint8_t>(len)};
      ++code;
    }
    code <<= 1;
  }
  return table;
}

class BitWriter {
 public:
  explicit BitWriter(JpegBytes& out) : out_(out) {}

  void put(std::uint32_t bits, int count) {
    acc_ = (acc_ << count) | (bits & ((1u << count) - 1));
    used_ += count;
    while (used_ >= 8) {
      used_ -= 8;
      const auto byte = static_cast<std::uint8_t>(acc_ >> used_);
      out_.push_back(byte);
      if (byte == 0xFF) out_.push_back(0x00);
    }
  }

  void flush() {
    if (used_ > 0) put(0x7F, 8 - used_);  // pad with 1-bits
  }

 private:
  JpegBytes& out_;
  std::uint64_t acc_ = 0;
  int used_ = 0;
};

int magnitude_category(int v) { return v == 0 ? 0 : std::bit_width(static_cast<unsigned>(std::abs(v))); }

struct ComponentCoder {
  const std::array<HuffmanCode, 256>* dc;
  const std::array<HuffmanCode, 256>* ac;
  int prediction = 0;
};

void encode_block(BitWriter& bits, ComponentCoder& coder, const std::int16_t* coefs) {
  const auto& zz = zigzag_order();
  const int diff = coefs[0] - coder.prediction;
  coder.prediction = coefs[0];
  const int dc_cat = magnitude_category(diff);
  const auto& dc_code = (*coder.dc)[dc_cat];
  bits.put(dc_code.code, dc_code.length);
  if (dc_cat) bits.put(static_cast<std::uint32_t>(diff < 0 ? diff - 1 : diff), dc_cat);

  int run = 0;
  for (int k = 1; k < 64; ++k) {
    const int v = coefs[zz[k]];
    if (v == 0) {
      ++run;
      continue;
    }
    while (run > 15) {
      const auto& zrl = (*coder.ac)[0xF0];
      bits.put(zrl.code, zrl.length);
      run -= 16;
    }
    const int cat = magnitude_category(v);
    const auto& code = (*coder.ac)[(run << 4) | cat];
    bits.put(code.code, code.length);
    bits.put(static_cast<std::uint32_t>(v < 0 ? v - 1 : v), cat);
    run = 0;
  }
  if (run > 0) {
    const auto& eob = (*coder.ac)[0x00];
    bits.put(eob.code, eob.length);
  }
}

void put_u16(JpegBytes& out, unsigned v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_marker(JpegBytes& out, std::uint8_t marker) {
  out.push_back(0xFF);
  out.push_back(marker);
}

void write_dht(JpegBytes& out, std::uint8_t class_and_id, const HuffmanSpec& spec) {
  put_marker(out, detail::kDHT);
  put_u16(out, 2 + 1 + 16 + static_cast<unsigned>(spec.symbols.size()));
  out.push_back(class_and_id);
  out.insert(out.end(), spec.counts.begin(), spec.counts.end());
  out.insert(out.end(), spec.symbols.begin(), spec.symbols.end());
}

// Component plane padded to whole blocks by edge replication.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;
};

std::vector<Plane> split_planes(const PixelImage& img, int padded_w, int padded_h) {
  const int nc = img.channels();
  std::vector<Plane> planes(nc);
  for (auto& p : planes) {
    p.width = padded_w;
    p.height = padded_h;
    p.samples.resize(static_cast<std::size_t>(padded_w) * padded_h);
  }
  const auto& k = simd::kernels();
  for (int y = 0; y < img.height(); ++y) {
    const std::size_t off = static_cast<std::size_t>(y) * padded_w;
    if (nc == 3) {
      k.rgb_to_ycc(img.row(y).data(), img.width(), planes[0].samples.data() + off,
                   planes[1].samples.data() + off, planes[2].samples.data() + off);
    } else {
      std::copy_n(img.row(y).data(), img.width(), planes[0].samples.data() + off);
    }
    for (auto& p : planes) {
      std::fill(p.samples.begin() + off + img.width(), p.samples.begin() + off + padded_w,
                p.samples[off + img.width() - 1]);
    }
  }
  for (auto& p : planes) {
    const auto last = p.samples.begin() + static_cast<std::ptrdiff_t>(img.height() - 1) * padded_w;
    for (int y = img.height(); y < padded_h; ++y) {
      std::copy_n(last, padded_w, p.samples.begin() + static_cast<std::ptrdiff_t>(y) * padded_w);
    }
  }
  return planes;
}

}  // namespace

JpegBytes encode_jpeg(const PixelImage& img, QualityFactor qf) {
  if (img.width() < 8 || img.height() < 8) {
    throw Error(ErrorKind::kDimension, "encode_jpeg: image must be at least 8x8");
  }
  if (img.width() > 65535 || img.height() > 65535) {
    throw Error(ErrorKind::kDimension, "encode_jpeg: image exceeds 65535 pixels per side");
  }
  const int nc = img.channels();
  const QuantTable qt[2] = {scale_quant_table(annex_k_luma_table(), qf),
                            scale_quant_table(annex_k_chroma_table(), qf)};

  JpegBytes out;
  out.reserve(static_cast<std::size_t>(img.width()) * img.height() * nc / 4 + 1024);
  put_marker(out, detail::kSOI);

  put_marker(out, detail::kAPP0);
  put_u16(out, 16);
  for (char c : std::string_view("JFIF", 5)) out.push_back(static_cast<std::uint8_t>(c));
  out.insert(out.end(), {1, 1, 0, 0, 1, 0, 1, 0, 0});

  const auto& zz = zigzag_order();
  const int tables = nc == 3 ? 2 : 1;
  put_marker(out, detail::kDQT);
  put_u16(out, 2 + 65 * tables);
  for (int t = 0; t < tables; ++t) {
    out.push_back(static_cast<std::uint8_t>(t));
    for (int i = 0; i < 64; ++i) out.push_back(static_cast<std::uint8_t>(qt[t][zz[i]]));
  }

  put_marker(out, detail::kSOF0);
  put_u16(out, 8 + 3 * nc);
  out.push_back(8);
  put_u16(out, static_cast<unsigned>(img.height()));
  put_u16(out, static_cast<unsigned>(img.width()));
  out.push_back(static_cast<std::uint8_t>(nc));
  for (int c = 0; c < nc; ++c) {
    out.insert(out.end(), {static_cast<std::uint8_t>(c + 1), 0x11, static_cast<std::uint8_t>(c ? 1 : 0)});
  }

  write_dht(out, 0x00, detail::dc_luma_spec());
  write_dht(out, 0x10, detail::ac_luma_spec());
  if (nc == 3) {
    write_dht(out, 0x01, detail::dc_chroma_spec());
    write_dht(out, 0x11, detail::ac_chroma_spec());
  }

  put_marker(out, detail::kSOS);
  put_u16(out, 6 + 2 * nc);
  out.push_back(static_cast<std::uint8_t>(nc));
  for (int c = 0; c < nc; ++c) {
    out.push_back(static_cast<std::uint8_t>(c + 1));
    out.push_back(c ? 0x11 : 0x00);
  }
  out.insert(out.end(), {0, 63, 0});

  static const auto dc_luma = build_codes(detail::dc_luma_spec());
  static const auto ac_luma = build_codes(detail::ac_luma_spec());
  static const auto dc_chroma = build_codes(detail::dc_chroma_spec());
  static const auto ac_chroma = build_codes(detail::ac_chroma_spec());

  const int padded_w = (img.width() + 7) / 8 * 8;
  const int padded_h = (img.height() + 7) / 8 * 8;
  const auto planes = split_planes(img, padded_w, padded_h);

  float divisors[2][64];
  for (int t = 0; t < 2; ++t) {
    for (int i = 0; i < 64; ++i) divisors[t][i] = static_cast<float>(qt[t][i]);
  }

  ComponentCoder coders[3] = {{&dc_luma, &ac_luma}, {&dc_chroma, &ac_chroma}, {&dc_chroma, &ac_chroma}};
  const auto& kern = simd::kernels();
  BitWriter bits(out);
  alignas(32) float block[64];
  alignas(32) std::int16_t coefs[64];
  for (int by = 0; by < padded_h; by += 8) {
    for (int bx = 0; bx < padded_w; bx += 8) {
      for (int c = 0; c < nc; ++c) {
        const auto& p = planes[c];
        for (int y = 0; y < 8; ++y) {
          const std::uint8_t* src = p.samples.data() + static_cast<std::size_t>(by + y) * p.width + bx;
          for (int x = 0; x < 8; ++x) block[y * 8 + x] = static_cast<float>(src[x]) - 128.0f;
        }
        kern.fdct_quantize(block, divisors[c ? 1 : 0], coefs);
        encode_block(bits, coders[c], coefs);
      }
    }
  }
  bits.flush();
  put_marker(out, detail::kEOI);
  return out;
}

}  // namespace etcid::jpeg
