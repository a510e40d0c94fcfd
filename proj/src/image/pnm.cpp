// SPDX-License-Identifier: Apache-2.0
#include "etcid/image/pnm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "etcid/error.hpp"
#include "etcid/jpeg/codec.hpp"

namespace etcid {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw Error(ErrorKind::kFormat, "PNM: malformed header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1 << 24) throw Error(ErrorKind::kFormat, "PNM: header value too large");
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorKind::kFormat, "PNM: malformed header");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

PixelImage decode_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw Error(ErrorKind::kFormat, "PNM: expected binary P5 or P6 signature");
  }
  const int channels = bytes[1] == '6' ? 3 : 1;
  HeaderReader header(bytes);
  const int width = header.next_int();
  const int height = header.next_int();
  const int maxval = header.next_int();
  if (maxval != 255) throw Error(ErrorKind::kFormat, "PNM: only maxval 255 is supported");
  if (width <= 0 || height <= 0) throw Error(ErrorKind::kFormat, "PNM: empty image");
  const std::size_t offset = header.raster_offset();
  const std::size_t size = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - offset < size) throw Error(ErrorKind::kFormat, "PNM: truncated raster");
  std::vector<std::uint8_t> samples(bytes.begin() + offset, bytes.begin() + offset + size);
  return PixelImage(width, height, channels, std::move(samples));
}

std::vector<std::uint8_t> encode_pnm(const PixelImage& img) {
  const std::string header = std::string(img.channels() == 3 ? "P6\n" : "P5\n") +
                             std::to_string(img.width()) + " " + std::to_string(img.height()) +
                             "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.samples().begin(), img.samples().end());
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::kIo, "read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

PixelImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) {
    return jpeg::decode_jpeg(bytes);
  }
  return decode_pnm(bytes);
}

}  // namespace etcid
