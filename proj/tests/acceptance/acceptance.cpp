// SPDX-License-Identifier: Apache-2.0
//
// One PASS/FAIL line per acceptance criterion; nonzero exit on any failure.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "etcid/bench/report.hpp"
#include "etcid/cipher/block_image.hpp"
#include "etcid/cipher/etc.hpp"
#include "etcid/jpeg/dc.hpp"

using namespace etcid;
using bench::KeyMode;
using bench::Scheme;

namespace {

int failures = 0;

void verdict(const char* name, bool ok, std::string detail) {
  while (!detail.empty() && detail.back() == ' ') detail.pop_back();
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string pr(const bench::PrScore& s) {
  return "p=" + bench::format_percent(s.precision()) + " r=" + bench::format_percent(s.recall());
}

bool perfect(const bench::PrScore& s) { return s.precision() == 100.0 && s.recall() == 100.0; }

PixelImage random_pixels(int w, int h, int channels, std::mt19937_64& rng) {
  PixelImage img(w, h, channels);
  const int style = static_cast<int>(rng() % 4);
  const int flat = static_cast<int>(rng() % 256);
  std::uniform_int_distribution<int> noise(0, 255);
  for (auto& s : img.samples()) {
    switch (style) {
      case 0: s = static_cast<std::uint8_t>(noise(rng)); break;
      case 1: s = static_cast<std::uint8_t>(flat); break;
      case 2: s = static_cast<std::uint8_t>(noise(rng) < 128 ? 0 : 255); break;
      default: s = static_cast<std::uint8_t>(std::clamp(flat + noise(rng) / 16 - 8, 0, 255)); break;
    }
  }
  return img;
}

int block_dc(const cipher::BlockImage& b) { return jpeg::extract_dc_luma(b.to_pixels()).values[0]; }

void cipher_round_trip() {
  std::mt19937_64 rng(1001);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const int w = 8 * static_cast<int>(1 + rng() % 12), h = 8 * static_cast<int>(1 + rng() % 12);
    const int channels = rng() % 2 ? 3 : 1;
    const auto img = random_pixels(w, h, channels, rng);
    const cipher::KeySet keys(rng(), rng());
    const cipher::EncryptionParams p{1 + rng() % img.block_count()};
    if (cipher::decrypt(cipher::encrypt(img, keys, p), keys, p) != img) ++bad;
  }
  verdict("cipher-round-trip", bad == 0, std::to_string(1000 - bad) + "/1000 sample-exact");
}

void dc_invariants() {
  std::mt19937_64 rng(2002);
  int out_of_range = 0, dihedral_bad = 0, negpos_bad = 0, lo = 0, hi = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto px = random_pixels(8, 8, rng() % 2 ? 3 : 1, rng);
    const auto base = cipher::BlockImage::from_pixels(px);
    const int dc = block_dc(base);
    lo = std::min(lo, dc);
    hi = std::max(hi, dc);
    if (dc < jpeg::kMinDc || dc > jpeg::kMaxDc) ++out_of_range;
    for (int d = 0; d < 8; ++d) {
      auto t = base;
      cipher::apply_dihedral(t.block(0), d);
      if (block_dc(t) != dc) ++dihedral_bad;
    }
    auto n = base;
    cipher::negate_block(n.block(0));
    if (block_dc(n) != -dc - 8) ++negpos_bad;
  }
  std::ostringstream detail;
  detail << "range [" << lo << ", " << hi << "] out=" << out_of_range << " dihedral=" << dihedral_bad
         << " negpos=" << negpos_bad << " of 10000";
  verdict("dc-invariants", out_of_range + dihedral_bad + negpos_bad == 0, detail.str());
}

void layer_separation() {
  std::mt19937_64 rng(3003);
  int bad_source = 0, bad_dc = 0, worst = 0;
  for (int i = 0; i < 100; ++i) {
    const int w = 8 * static_cast<int>(4 + rng() % 12), h = 8 * static_cast<int>(4 + rng() % 12);
    const auto img = random_pixels(w, h, rng() % 2 ? 3 : 1, rng);
    const std::uint64_t k0 = rng(), k = rng();
    std::uint64_t k_prime = rng();
    if (k_prime == k) ++k_prime;
    const cipher::KeySet a_keys(k0, k), b_keys(k0, k_prime);
    const cipher::EncryptionParams p{1 + rng() % (img.block_count() / 2)};
    const auto a = cipher::encrypt(img, a_keys, p);
    const auto b = cipher::encrypt(img, b_keys, p);
    const auto src = cipher::BlockImage::from_pixels(img);
    const auto l1 = cipher::layer1_permutation(a_keys, src.block_count());
    const auto ua = cipher::undo_block_transforms(cipher::BlockImage::from_pixels(a), a_keys);
    const auto ub = cipher::undo_block_transforms(cipher::BlockImage::from_pixels(b), b_keys);
    const auto dc_a = jpeg::extract_dc_luma(a), dc_b = jpeg::extract_dc_luma(b);
    for (std::size_t m = 0; m < p.n_fixed; ++m) {
      const auto s = src.block(l1[m]);
      if (!std::ranges::equal(ua.block(m), s) || !std::ranges::equal(ub.block(m), s)) ++bad_source;
      const int diff = std::abs(std::abs(dc_a.values[m]) - std::abs(dc_b.values[m]));
      worst = std::max(worst, diff);
      if (diff > 8) ++bad_dc;
    }
  }
  verdict("layer-separation", bad_source + bad_dc == 0,
          "100 cases, source mismatches=" + std::to_string(bad_source) + " max ||DC|-|DC'||=" +
              std::to_string(worst));
}

}  // namespace

int main() {
  cipher_round_trip();
  dc_invariants();
  layer_separation();

  bench::BenchConfig cfg;  // 50 synthetic 640x480 images, conditions 1-3, d = 150
  cfg.sweep = {160, 480};
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto first = bench::run_bench(cfg);
  std::printf("bench: %zu images, N=%zu, d=%d\n", first.images, first.n_fixed, first.threshold);

  auto table_check = [&](const char* name, Scheme scheme, KeyMode mode, auto accept) {
    bool ok = true;
    std::string detail;
    for (int c : cfg.conditions) {
      const auto* row = first.find(c, scheme, mode);
      const bool row_ok = row != nullptr && accept(row->evaluation.pairwise);
      ok = ok && row_ok;
      detail += "(" + std::to_string(c) + ") " + (row ? pr(row->evaluation.pairwise) : "missing") + "  ";
    }
    verdict(name, ok, detail);
  };
  table_check("same-key-identification", Scheme::kProposed, KeyMode::kSameKey, perfect);
  table_check("rekeyed-identification", Scheme::kProposed, KeyMode::kRekeyed, perfect);
  table_check("sign-baseline-rekeyed", Scheme::kDcSign, KeyMode::kRekeyed,
              [](const bench::PrScore& s) { return s.recall().value_or(100.0) <= 5.0; });

  bool sweep_ok = true;
  std::string sweep_detail;
  for (int c : cfg.conditions) {
    for (auto mode : cfg.modes) {
      const bench::SweepReportRow *at160 = nullptr, *at480 = nullptr;
      for (const auto& s : first.sweep) {
        if (s.condition != c || s.mode != mode) continue;
        if (s.n_fixed == 160) at160 = &s;
        if (s.n_fixed == 480) at480 = &s;
      }
      const bool ok = at160 && at480 && at160->evaluation.pairwise == at480->evaluation.pairwise;
      sweep_ok = sweep_ok && ok;
      if (at160) sweep_detail += "(" + std::to_string(c) + "," + bench::to_string(mode) + ") " +
                                 pr(at160->evaluation.pairwise) + "  ";
    }
  }
  verdict("n-sweep-160-equals-480", sweep_ok, sweep_detail);

  const auto second = bench::run_bench(cfg);
  const bool same = bench::render_text(first) == bench::render_text(second) &&
                    bench::render_json(first) == bench::render_json(second);
  verdict("bench-determinism", same, same ? "text and json reports byte-identical" : "reports differ");

  std::printf("%s\n", failures == 0 ? "ALL PASS" : "FAILURES PRESENT");
  return failures == 0 ? 0 : 1;
}
