// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <optional>
#include <string>

#include "etcid/error.hpp"
#include "etcid/jpeg/codec.hpp"
#include "etcid/simd/kernels.hpp"
#include "tables.hpp"

namespace etcid::jpeg {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::kFormat, "JPEG: " + what); }

constexpr int kLookupBits = 9;

// Decoding tables for one Huffman table (Annex F.2.2.3 plus a lookahead LUT).
class HuffmanDecoder {
 public:
  HuffmanDecoder() = default;

  HuffmanDecoder(const std::array<std::uint8_t, 16>& counts, std::vector<std::uint8_t> symbols)
      : symbols_(std::move(symbols)) {
    int code = 0;
    int k = 0;
    lookup_.fill(0);
    for (int len = 1; len <= 16; ++len) {
      value_offset_[len] = k - code;
      for (int i = 0; i < counts[len - 1]; ++i) {
        if (len <= kLookupBits) {
          const int shift = kLookupBits - len;
          for (int fill = 0; fill < (1 << shift); ++fill) {
            lookup_[(code << shift) | fill] = static_cast<std::uint16_t>((len << 8) | symbols_[k]);
          }
        }
        ++code;
        ++k;
      }
      max_code_[len] = counts[len - 1] ? code - 1 : -1;
      if (code > (1 << len)) fail("invalid Huffman table");
      code <<= 1;
    }
    valid_ = true;
  }

  bool valid() const noexcept { return valid_; }

  template <class Reader>
  int decode(Reader& bits) const {
    const int peek = static_cast<int>(bits.peek(kLookupBits));
    if (const auto hit = lookup_[peek]; hit) {
      bits.skip(hit >> 8);
      return hit & 0xFF;
    }
    const int word = static_cast<int>(bits.peek(16));
    for (int len = kLookupBits + 1; len <= 16; ++len) {
      const int code = word >> (16 - len);
      if (code <= max_code_[len]) {
        bits.skip(len);
        const int index = value_offset_[len] + code;
        if (index < 0 || index >= static_cast<int>(symbols_.size())) break;
        return symbols_[index];
      }
    }
    fail("corrupt Huffman code");
  }

 private:
  std::vector<std::uint8_t> symbols_;
  std::array<std::uint16_t, 1 << kLookupBits> lookup_{};
  std::array<int, 17> max_code_{};
  std::array<int, 17> value_offset_{};
  bool valid_ = false;
};

// Entropy-coded segment reader. Stops at any marker other than stuffed 0xFF00;
// bits read past the end of the segment are zeros and count as truncation.
class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> data, std::size_t pos) : data_(data), pos_(pos) {}

  std::uint32_t peek(int n) {
    if (count_ < n) fill();
    return static_cast<std::uint32_t>((acc_ >> (count_ - n)) & ((1ull << n) - 1));
  }

  void skip(int n) {
    if (count_ < n) fill();
    count_ -= n;
    if (count_ < padding_) fail("unexpected end of entropy-coded data");
  }

  int receive(int n) {
    if (n == 0) return 0;
    const auto v = static_cast<int>(peek(n));
    skip(n);
    return v;
  }

  // Consumes an RSTn marker, resetting bit alignment.
  void restart(int expected) {
    acc_ = 0;
    count_ = 0;
    padding_ = 0;
    while (pos_ + 1 < data_.size() && data_[pos_] == 0xFF && data_[pos_ + 1] == 0xFF) ++pos_;
    if (pos_ + 1 >= data_.size() || data_[pos_] != 0xFF ||
        data_[pos_ + 1] != detail::kRST0 + (expected & 7)) {
      fail("missing restart marker");
    }
    pos_ += 2;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  void fill() {
    while (count_ <= 56) {
      std::uint8_t byte = 0;
      if (pos_ < data_.size() && data_[pos_] != 0xFF) {
        byte = data_[pos_++];
      } else if (pos_ + 1 < data_.size() && data_[pos_] == 0xFF && data_[pos_ + 1] == 0x00) {
        byte = 0xFF;
        pos_ += 2;
      } else {
        padding_ += 8;
      }
      acc_ = (acc_ << 8) | byte;
      count_ += 8;
    }
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_;
  std::uint64_t acc_ = 0;
  int count_ = 0;
  int padding_ = 0;
};

int extend(int v, int s) { return s && v < (1 << (s - 1)) ? v - (1 << s) + 1 : v; }

struct Component {
  int id = 0;
  int h = 1;
  int v = 1;
  int quant = 0;
  int dc_table = 0;
  int ac_table = 0;
  int prediction = 0;
  int blocks_w = 0;  // plane extent in blocks, covering whole MCUs
  int blocks_h = 0;
  std::vector<std::uint8_t> plane;
};

class Decoder {
 public:
  explicit Decoder(std::span<const std::uint8_t> bytes) : data_(bytes) {}

  PixelImage run() {
    if (data_.size() < 4 || data_[0] != 0xFF || data_[1] != detail::kSOI) fail("missing SOI");
    pos_ = 2;
    bool done = false;
    while (!done) {
      const std::uint8_t marker = next_marker();
      switch (marker) {
        case detail::kSOF0:
        case detail::kSOF1:
          read_frame();
          break;
        case 0xC2:
        case 0xC6:
        case 0xCA:
        case 0xCE:
          fail("progressive JPEG is not supported");
        case 0xC3:
        case 0xC5:
        case 0xC7:
        case 0xC9:
        case 0xCB:
        case 0xCD:
        case 0xCF:
          fail("lossless, hierarchical or arithmetic-coded JPEG is not supported");
        case 0xCC:
          fail("arithmetic coding is not supported");
        case detail::kDHT:
          read_dht();
          break;
        case detail::kDQT:
          read_dqt();
          break;
        case detail::kDRI:
          read_dri();
          break;
        case detail::kSOS:
          read_scan();
          break;
        case detail::kAPP14:
          read_adobe();
          break;
        case detail::kEOI:
          done = true;
          break;
        default:
          if (marker >= detail::kRST0 && marker <= detail::kRST0 + 7) break;
          skip_segment();
          break;
      }
    }
    if (!frame_seen_ || scans_ == 0) fail("no image data");
    return assemble();
  }

  std::vector<QuantTable> quant_tables() {
    if (data_.size() < 4 || data_[0] != 0xFF || data_[1] != detail::kSOI) fail("missing SOI");
    pos_ = 2;
    while (true) {
      const std::uint8_t marker = next_marker();
      if (marker == detail::kDQT) {
        read_dqt();
      } else if (marker == detail::kSOS || marker == detail::kEOI) {
        break;
      } else {
        skip_segment();
      }
    }
    std::vector<QuantTable> out;
    for (int i = 0; i < 4 && quant_present_[i]; ++i) {
      QuantTable t{};
      for (int k = 0; k < 64; ++k) t[k] = static_cast<std::uint16_t>(quant_[i][k]);
      out.push_back(t);
    }
    return out;
  }

 private:
  std::uint8_t byte() {
    if (pos_ >= data_.size()) fail("unexpected end of stream");
    return data_[pos_++];
  }

  int u16() {
    const int hi = byte();
    return (hi << 8) | byte();
  }

  std::uint8_t next_marker() {
    // Tolerate fill bytes and stray data between segments.
    while (true) {
      if (pos_ >= data_.size()) fail("unexpected end of stream");
      if (data_[pos_] != 0xFF) {
        ++pos_;
        continue;
      }
      while (pos_ < data_.size() && data_[pos_] == 0xFF) ++pos_;
      const std::uint8_t m = byte();
      if (m != 0x00) return m;
    }
  }

  // Returns the payload span of the current segment and advances past it.
  std::span<const std::uint8_t> segment() {
    const int length = u16();
    if (length < 2 || pos_ + length - 2 > data_.size()) fail("truncated segment");
    auto payload = data_.subspan(pos_, static_cast<std::size_t>(length - 2));
    pos_ += static_cast<std::size_t>(length - 2);
    return payload;
  }

  void skip_segment() { segment(); }

  void read_dqt() {
    auto p = segment();
    std::size_t i = 0;
    const auto& zz = zigzag_order();
    while (i < p.size()) {
      const int precision = p[i] >> 4;
      const int id = p[i] & 15;
      ++i;
      if (id > 3 || precision > 1) fail("bad DQT");
      const std::size_t need = precision ? 128 : 64;
      if (p.size() - i < need) fail("truncated DQT");
      for (int k = 0; k < 64; ++k) {
        const int v = precision ? (p[i + 2 * k] << 8) | p[i + 2 * k + 1] : p[i + k];
        quant_[id][zz[k]] = v;
      }
      quant_present_[id] = true;
      i += need;
    }
  }

  void read_dht() {
    auto p = segment();
    std::size_t i = 0;
    while (i < p.size()) {
      if (p.size() - i < 17) fail("truncated DHT");
      const int cls = p[i] >> 4;
      const int id = p[i] & 15;
      if (cls > 1 || id > 3) fail("bad DHT");
      std::array<std::uint8_t, 16> counts{};
      int total = 0;
      for (int k = 0; k < 16; ++k) total += counts[k] = p[i + 1 + k];
      i += 17;
      if (total > 256 || p.size() - i < static_cast<std::size_t>(total)) fail("truncated DHT");
      std::vector<std::uint8_t> symbols(p.begin() + i, p.begin() + i + total);
      i += total;
      huffman_[cls][id] = HuffmanDecoder(counts, std::move(symbols));
    }
  }

  void read_dri() {
    auto p = segment();
    if (p.size() < 2) fail("bad DRI");
    restart_interval_ = (p[0] << 8) | p[1];
  }

  void read_adobe() {
    auto p = segment();
    if (p.size() >= 12 && std::equal(p.begin(), p.begin() + 5, "Adobe")) adobe_transform_ = p[11];
  }

  void read_frame() {
    if (frame_seen_) fail("multiple frames");
    auto p = segment();
    if (p.size() < 6) fail("bad SOF");
    if (p[0] != 8) fail("only 8-bit precision is supported");
    height_ = (p[1] << 8) | p[2];
    width_ = (p[3] << 8) | p[4];
    const int nc = p[5];
    if (width_ == 0 || height_ == 0) fail("zero image dimension");
    if (nc != 1 && nc != 3) fail("only 1 or 3 components are supported");
    if (p.size() < 6 + 3u * nc) fail("bad SOF");
    components_.resize(nc);
    for (int c = 0; c < nc; ++c) {
      auto& comp = components_[c];
      comp.id = p[6 + 3 * c];
      comp.h = p[7 + 3 * c] >> 4;
      comp.v = p[7 + 3 * c] & 15;
      comp.quant = p[8 + 3 * c];
      if (comp.h < 1 || comp.h > 2 || comp.v < 1 || comp.v > 2 || comp.quant > 3) {
        fail("unsupported sampling factors");
      }
      hmax_ = std::max(hmax_, comp.h);
      vmax_ = std::max(vmax_, comp.v);
    }
    mcus_x_ = (width_ + 8 * hmax_ - 1) / (8 * hmax_);
    mcus_y_ = (height_ + 8 * vmax_ - 1) / (8 * vmax_);
    for (auto& comp : components_) {
      comp.blocks_w = mcus_x_ * comp.h;
      comp.blocks_h = mcus_y_ * comp.v;
      comp.plane.assign(static_cast<std::size_t>(comp.blocks_w) * comp.blocks_h * 64, 0);
    }
    frame_seen_ = true;
  }

  void decode_block(BitReader& bits, Component& comp, int bx, int by) {
    const auto& dc = huffman_[0][comp.dc_table];
    const auto& ac = huffman_[1][comp.ac_table];
    alignas(32) std::int16_t coefs[64] = {};
    const auto& zz = zigzag_order();

    const int s = dc.decode(bits);
    if (s > 11) fail("bad DC magnitude");
    comp.prediction += extend(bits.receive(s), s);
    coefs[0] = static_cast<std::int16_t>(comp.prediction);
    for (int k = 1; k < 64;) {
      const int rs = ac.decode(bits);
      const int run = rs >> 4;
      const int size = rs & 15;
      if (size == 0) {
        if (run != 15) break;
        k += 16;
        continue;
      }
      k += run;
      if (k > 63) fail("AC coefficient index out of range");
      coefs[zz[k]] = static_cast<std::int16_t>(extend(bits.receive(size), size));
      ++k;
    }

    alignas(32) std::uint8_t pixels[64];
    kernels_->idct_dequantize(coefs, quant_[comp.quant].data(), pixels);
    const std::size_t stride = static_cast<std::size_t>(comp.blocks_w) * 8;
    std::uint8_t* dst = comp.plane.data() + static_cast<std::size_t>(by) * 8 * stride + bx * 8;
    for (int y = 0; y < 8; ++y) std::copy_n(pixels + y * 8, 8, dst + y * stride);
  }

  void read_scan() {
    if (!frame_seen_) fail("scan before frame header");
    auto p = segment();
    if (p.empty()) fail("bad SOS");
    const int ns = p[0];
    if (ns < 1 || ns > static_cast<int>(components_.size()) || p.size() < 1 + 2u * ns + 3) {
      fail("bad SOS");
    }
    std::vector<Component*> scan;
    for (int i = 0; i < ns; ++i) {
      const int id = p[1 + 2 * i];
      auto it = std::find_if(components_.begin(), components_.end(),
                             [id](const Component& c) { return c.id == id; });
      if (it == components_.end()) fail("scan references unknown component");
      it->dc_table = p[2 + 2 * i] >> 4;
      it->ac_table = p[2 + 2 * i] & 15;
      if (it->dc_table > 3 || it->ac_table > 3 || !huffman_[0][it->dc_table].valid() ||
          !huffman_[1][it->ac_table].valid()) {
        fail("scan references undefined Huffman table");
      }
      if (!quant_present_[it->quant]) fail("component references undefined quantization table");
      it->prediction = 0;
      scan.push_back(&*it);
    }
    const int ss = p[1 + 2 * ns], se = p[2 + 2 * ns], ahal = p[3 + 2 * ns];
    if (ss != 0 || se != 63 || ahal != 0) fail("spectral selection is not supported");

    kernels_ = &simd::kernels();
    BitReader bits(data_, pos_);
    int units_since_restart = 0;
    int restart_index = 0;
    auto maybe_restart = [&] {
      if (restart_interval_ == 0) return;
      if (++units_since_restart == restart_interval_) {
        bits.restart(restart_index++);
        units_since_restart = 0;
        for (auto* c : scan) c->prediction = 0;
      }
    };

    if (ns == 1) {
      // Non-interleaved: the component's own block grid, cropped to the image.
      Component& comp = *scan[0];
      const int comp_w = (width_ * comp.h + hmax_ - 1) / hmax_;
      const int comp_h = (height_ * comp.v + vmax_ - 1) / vmax_;
      const int bw = (comp_w + 7) / 8;
      const int bh = (comp_h + 7) / 8;
      const int total = bw * bh;
      for (int n = 0; n < total; ++n) {
        decode_block(bits, comp, n % bw, n / bw);
        if (n + 1 < total) maybe_restart();
      }
    } else {
      const int total = mcus_x_ * mcus_y_;
      for (int n = 0; n < total; ++n) {
        const int mx = n % mcus_x_;
        const int my = n / mcus_x_;
        for (auto* comp : scan) {
          for (int v = 0; v < comp->v; ++v) {
            for (int h = 0; h < comp->h; ++h) {
              decode_block(bits, *comp, mx * comp->h + h, my * comp->v + v);
            }
          }
        }
        if (n + 1 < total) maybe_restart();
      }
    }
    pos_ = bits.position();
    ++scans_;
  }

  // Full-resolution plane of a subsampled component. 2:1 ratios use the
  // triangular filter of libjpeg's default ("fancy") upsampling, other ratios
  // replicate.
  std::vector<std::uint8_t> upsample(const Component& comp) const {
    const std::size_t stride = static_cast<std::size_t>(comp.blocks_w) * 8;
    const int hr = hmax_ / comp.h;
    const int vr = vmax_ / comp.v;
    const int dw = (width_ * comp.h + hmax_ - 1) / hmax_;
    const int dh = (height_ * comp.v + vmax_ - 1) / vmax_;
    const bool fancy = hmax_ % comp.h == 0 && vmax_ % comp.v == 0 && hr <= 2 && vr <= 2 && dw > 1;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(width_) * height_);
    std::vector<int> sums(dw);
    std::vector<std::uint8_t> wide(2 * static_cast<std::size_t>(dw));
    for (int y = 0; y < height_; ++y) {
      std::uint8_t* dst = out.data() + static_cast<std::size_t>(y) * width_;
      if (!fancy) {
        const std::uint8_t* src = comp.plane.data() + static_cast<std::size_t>(y * comp.v / vmax_) * stride;
        for (int x = 0; x < width_; ++x) dst[x] = src[x * comp.h / hmax_];
        continue;
      }
      const int in_row = y / vr;
      const std::uint8_t* src = comp.plane.data() + static_cast<std::size_t>(in_row) * stride;
      if (vr == 1) {
        for (int i = 0; i < dw; ++i) {
          wide[2 * i] = static_cast<std::uint8_t>(i == 0 ? src[0] : (3 * src[i] + src[i - 1] + 1) >> 2);
          wide[2 * i + 1] =
              static_cast<std::uint8_t>(i == dw - 1 ? src[i] : (3 * src[i] + src[i + 1] + 2) >> 2);
        }
        std::copy_n(wide.data(), width_, dst);
        continue;
      }
      const bool upper = y % 2 == 0;
      const int near = std::clamp(upper ? in_row - 1 : in_row + 1, 0, dh - 1);
      const std::uint8_t* nb = comp.plane.data() + static_cast<std::size_t>(near) * stride;
      for (int i = 0; i < dw; ++i) sums[i] = 3 * src[i] + nb[i];
      if (hr == 1) {
        const int bias = upper ? 1 : 2;
        for (int x = 0; x < width_; ++x) dst[x] = static_cast<std::uint8_t>((sums[x] + bias) >> 2);
        continue;
      }
      for (int i = 0; i < dw; ++i) {
        wide[2 * i] =
            static_cast<std::uint8_t>(i == 0 ? (sums[0] * 4 + 8) >> 4 : (sums[i] * 3 + sums[i - 1] + 8) >> 4);
        wide[2 * i + 1] = static_cast<std::uint8_t>(i == dw - 1 ? (sums[i] * 4 + 7) >> 4
                                                                : (sums[i] * 3 + sums[i + 1] + 7) >> 4);
      }
      std::copy_n(wide.data(), width_, dst);
    }
    return out;
  }

  PixelImage assemble() const {
    const int nc = static_cast<int>(components_.size());
    PixelImage out(width_, height_, nc);
    std::vector<std::uint8_t> full[3];
    const std::uint8_t* base[3];
    std::size_t stride[3];
    for (int c = 0; c < nc; ++c) {
      const auto& comp = components_[c];
      if (comp.h == hmax_ && comp.v == vmax_) {
        base[c] = comp.plane.data();
        stride[c] = static_cast<std::size_t>(comp.blocks_w) * 8;
      } else {
        full[c] = upsample(comp);
        base[c] = full[c].data();
        stride[c] = static_cast<std::size_t>(width_);
      }
    }
    const auto& k = simd::kernels();
    for (int y = 0; y < height_; ++y) {
      const std::uint8_t* rows[3];
      for (int c = 0; c < nc; ++c) rows[c] = base[c] + static_cast<std::size_t>(y) * stride[c];
      auto dst = out.row(y);
      if (nc == 1) {
        std::copy_n(rows[0], width_, dst.data());
      } else if (adobe_transform_ == 0) {
        for (int x = 0; x < width_; ++x) {
          for (int c = 0; c < 3; ++c) dst[3 * x + c] = rows[c][x];
        }
      } else {
        k.ycc_to_rgb(rows[0], rows[1], rows[2], width_, dst.data());
      }
    }
    return out;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::array<std::array<std::int32_t, 64>, 4> quant_{};
  std::array<bool, 4> quant_present_{};
  HuffmanDecoder huffman_[2][4];
  std::vector<Component> components_;
  int width_ = 0;
  int height_ = 0;
  int hmax_ = 1;
  int vmax_ = 1;
  int mcus_x_ = 0;
  int mcus_y_ = 0;
  int restart_interval_ = 0;
  int adobe_transform_ = -1;
  int scans_ = 0;
  bool frame_seen_ = false;
  const simd::Kernels* kernels_ = nullptr;
};

}  // namespace

PixelImage decode_jpeg(std::span<const std::uint8_t> bytes) { return Decoder(bytes).run(); }

std::vector<QuantTable> read_quant_tables(std::span<const std::uint8_t> bytes) {
  return Decoder(bytes).quant_tables();
}

}  // namespace etcid::jpeg
