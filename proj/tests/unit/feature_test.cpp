// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "etcid/bench/corpus.hpp"
#include "etcid/cipher/etc.hpp"
#include "etcid/error.hpp"
#include "etcid/feature/feature.hpp"
#include "etcid/jpeg/codec.hpp"
#include "etcid/jpeg/dc.hpp"
#include "test_support.hpp"

namespace etcid::feature {
namespace {

// Largest per-block DC change caused by one JPEG round trip, measured on 20
// desk-corpus images encrypted under two keys at QF 95, 85, 75 and 70.
constexpr int kCodecDcError = 13;

FeatureVector fv(std::vector<std::uint16_t> v, std::string id = "x") { return {std::move(id), std::move(v)}; }

TEST(Compare, IdenticalAccepted) {
  const auto a = fv({0, 5, 1024, 77});
  for (int d : {0, 1, 150}) EXPECT_TRUE(compare(a, a, {4, d}).accepted);
}

TEST(Compare, EarlyExitOnFirstElement) {
  const auto a = fv({100, 0, 0, 0}), b = fv({100 + 151, 0, 0, 0});
  const auto r = compare(a, b, {4, 150});
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.evaluated, 1u);
}

TEST(Compare, ExactlyDAccepted) {
  const auto a = fv({0, 200, 500, 1024}), b = fv({150, 50, 650, 874});
  const auto r = compare(a, b, {4, 150});
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.evaluated, 4u);
  EXPECT_FALSE(compare(a, b, {4, 149}).accepted);
}

TEST(Compare, OnlyFirstNElementsCount) {
  const auto a = fv({1, 2, 3, 900}), b = fv({1, 2, 3, 0});
  EXPECT_TRUE(compare(a, b, {3, 0}).accepted);
  EXPECT_FALSE(compare(a, b, {4, 0}).accepted);
}

TEST(Compare, ShortVectorRejected) {
  try {
    compare(fv({1, 2}), fv({1, 2, 3}), {3, 10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
  }
  EXPECT_THROW(compare(fv({1}), fv({1}), {1, -1}), Error);
  EXPECT_THROW(compare(fv({1}), fv({1}), {0, 1}), Error);
}

TEST(Compare, SymmetricMonotoneAndEqualToFullEvaluation) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> val(0, 1024), noise(-60, 60);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    FeatureVector a, b;
    for (std::size_t i = 0; i < n; ++i) {
      const int v = val(rng);
      a.values.push_back(static_cast<std::uint16_t>(v));
      b.values.push_back(static_cast<std::uint16_t>(std::clamp(v + noise(rng), 0, 1024)));
    }
    const int d = static_cast<int>(rng() % 70);
    const bool ab = compare(a, b, {n, d}).accepted;
    ASSERT_EQ(ab, compare(b, a, {n, d}).accepted);
    bool full = true;
    for (std::size_t i = 0; i < n; ++i) full = full && std::abs(a.values[i] - b.values[i]) <= d;
    ASSERT_EQ(ab, full);
    if (ab) {
      for (int d2 = d; d2 < d + 20; ++d2) ASSERT_TRUE(compare(a, b, {n, d2}).accepted);
    }
  }
}

TEST(Identify, SelfMatchIsFirst) {
  const std::vector<FeatureVector> db{fv({500, 500}, "far"), fv({10, 20}, "self"), fv({15, 25}, "near")};
  const auto v = identify(fv({10, 20}, "q"), db, {2, 10});
  EXPECT_EQ(v.query_id, "q");
  ASSERT_TRUE(v.matched());
  EXPECT_EQ(*v.first_match(), 1u);
  EXPECT_EQ(v.matched_ids, (std::vector<std::string>{"self", "near"}));
  EXPECT_EQ(v.decisions, (std::vector<bool>{false, true, true}));
}

TEST(Identify, EmptyDatabaseNoMatch) {
  const auto v = identify(fv({1}), {}, {1, 150});
  EXPECT_FALSE(v.matched());
  EXPECT_FALSE(v.first_match().has_value());
  EXPECT_TRUE(v.decisions.empty());
}

TEST(Identify, DeterministicInScanOrder) {
  std::vector<FeatureVector> db;
  for (int i = 0; i < 30; ++i) db.push_back(fv({static_cast<std::uint16_t>(i * 10)}, std::to_string(i)));
  const auto a = identify(fv({100}), db, {1, 25});
  const auto b = identify(fv({100}), db, {1, 25});
  EXPECT_EQ(a.matched_ids, b.matched_ids);
  EXPECT_EQ(a.matched_ids, (std::vector<std::string>{"8", "9", "10", "11", "12"}));
}

TEST(ExtractFeature, UniformMidGrayFirstBlockIsZero) {
  auto img = test::smooth_image(64, 64, 3, 4);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = 128;
    }
  }
  const auto f = extract_feature(jpeg::encode_jpeg(img, jpeg::QualityFactor(90)), 6, "id");
  EXPECT_EQ(f.image_id, "id");
  ASSERT_EQ(f.size(), 6u);
  EXPECT_LE(f.values[0], 1);  // gray survives the codec up to one level
  const auto exact = feature_from_dc(jpeg::extract_dc_luma(img), 6);
  EXPECT_EQ(exact.values[0], 0);
}

TEST(ExtractFeature, BlackFirstBlockNear1024) {
  auto img = test::smooth_image(64, 64, 3, 5);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = 0;
    }
  }
  for (int qf : {95, 85, 70}) {
    const auto f = extract_feature(jpeg::encode_jpeg(img, jpeg::QualityFactor(qf)), 4);
    EXPECT_LE(1024 - f.values[0], kCodecDcError) << qf;
    EXPECT_LE(f.values[0], 1024);
  }
}

TEST(ExtractFeature, NOutOfRange) {
  const auto bytes = jpeg::encode_jpeg(test::smooth_image(16, 16, 3, 1), jpeg::QualityFactor(90));
  EXPECT_NO_THROW(extract_feature(bytes, 4));
  for (std::size_t n : {std::size_t{0}, std::size_t{5}}) {
    try {
      extract_feature(bytes, n);
      FAIL() << n;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
    }
  }
}

TEST(ExtractFeature, StableUnderReEncryption) {
  const auto corpus = bench::synthesize_corpus(4, 31337);
  for (const auto& img : corpus) {
    const auto p = cipher::EncryptionParams::default_for(img.pixels.block_count());
    const auto a = cipher::encrypt(img.pixels, cipher::KeySet(9, 1), p);
    const auto b = cipher::encrypt(img.pixels, cipher::KeySet(9, 2), p);
    const auto ja = jpeg::encode_jpeg(a, jpeg::QualityFactor(85));
    const auto jb = jpeg::encode_jpeg(b, jpeg::QualityFactor(85));
    const auto fa = extract_feature(ja, p.n_fixed), fb = extract_feature(jb, p.n_fixed);
    const auto exact = jpeg::extract_dc_luma(a);
    const auto coded = jpeg::extract_dc_luma(jpeg::decode_jpeg(ja));
    for (std::size_t m = 0; m < exact.size(); ++m) {
      ASSERT_LE(std::abs(exact.values[m] - coded.values[m]), kCodecDcError) << img.name << " block " << m;
    }
    for (std::size_t n = 0; n < p.n_fixed; ++n) {
      ASSERT_LE(std::abs(fa.values[n] - fb.values[n]), 8 + 2 * kCodecDcError) << img.name << " n " << n;
    }
  }
}

TEST(SignFeature, MidGrayIsAllZero) {
  PixelImage img(32, 16, 3);
  for (auto& s : img.samples()) s = 128;
  const auto s = extract_sign_feature(jpeg::encode_jpeg(img, jpeg::QualityFactor(90)), 8);
  EXPECT_EQ(s.bits, std::vector<std::uint8_t>(8, 0));
}

TEST(SignFeature, NegativeDcSetsBit) {
  jpeg::DcVector dc{3, 1, {-1, 0, 5}};
  EXPECT_EQ(sign_from_dc(dc, 3).bits, (std::vector<std::uint8_t>{1, 0, 0}));
}

TEST(SignFeature, RecompressionKeepsSignsRekeyingFlipsThem) {
  const auto img = bench::synthesize_corpus(1, 99).front().pixels;
  const auto p = cipher::EncryptionParams::default_for(img.block_count());
  const auto a = cipher::encrypt(img, cipher::KeySet(1, 2), p);
  const auto b = cipher::encrypt(img, cipher::KeySet(1, 3), p);
  const auto ja = jpeg::encode_jpeg(a, jpeg::QualityFactor(85));
  const auto ja2 = jpeg::encode_jpeg(jpeg::decode_jpeg(ja), jpeg::QualityFactor(75));
  const auto jb2 = jpeg::encode_jpeg(b, jpeg::QualityFactor(75));
  const auto sa = extract_sign_feature(ja, p.n_fixed);
  const auto sa2 = extract_sign_feature(ja2, p.n_fixed);
  const auto sb2 = extract_sign_feature(jb2, p.n_fixed);
  EXPECT_LE(hamming_distance(sa, sa2, p.n_fixed), p.n_fixed / 50);
  const auto flipped = hamming_distance(sa, sb2, p.n_fixed);
  EXPECT_GT(flipped, p.n_fixed / 4);
  EXPECT_LT(flipped, p.n_fixed * 3 / 4);
  EXPECT_FALSE(sign_match(sa, sb2, p.n_fixed));
}

}  // namespace
}  // namespace etcid::feature
