// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "etcid/bench/harness.hpp"
#include "etcid/bench/report.hpp"
#include "etcid/error.hpp"
#include "test_support.hpp"

namespace etcid::bench {
namespace {

using feature::IdentificationParams;

// Small images keep the dataset cheap; 160x120 gives M = 300, N = 30.
struct SmallSet {
  std::vector<CorpusImage> corpus;
  Dataset dataset;
  std::vector<LabeledFeatures> features;
};

const SmallSet& small_set() {
  static const SmallSet s = [] {
    SmallSet out;
    out.corpus = synthesize_corpus(8, 4242, 160, 120);
    out.dataset = build_dataset(out.corpus, ConditionGrid::standard(2), Seeds{});
    out.features = extract_features(out.dataset);
    return out;
  }();
  return s;
}

TEST(ConditionGrid, StandardRows) {
  const auto c1 = ConditionGrid::standard(1), c2 = ConditionGrid::standard(2), c3 = ConditionGrid::standard(3);
  EXPECT_EQ(c1.qf_original, 95);
  EXPECT_EQ(c1.qf_first, 95);
  EXPECT_EQ(c2.qf_original, 85);
  EXPECT_EQ(c3.qf_first, 75);
  for (const auto& c : {c1, c2, c3}) EXPECT_EQ(c.qf_second, (std::vector<int>{85, 80, 75, 70}));
  EXPECT_THROW(ConditionGrid::standard(4), Error);
  ConditionGrid bad;
  bad.qf_second = {85, 0};
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Dataset, OneImageGivesOnePlusFourPerVariant) {
  const auto corpus = synthesize_corpus(1, 1, 64, 48);
  const auto ds = build_dataset(corpus, ConditionGrid::standard(2), Seeds{});
  EXPECT_EQ(ds.originals.size(), 1u);
  for (auto v : {KeyVariant::kOriginal, KeyVariant::kRekeyed}) {
    EXPECT_EQ(ds.count(1, v), 1u);
    EXPECT_EQ(ds.count(2, v), 4u);
  }
  EXPECT_EQ(ds.entries.size(), 10u);
}

TEST(Dataset, FiftyImagesConditionTwo) {
  const auto corpus = synthesize_corpus(50, 5, 32, 24);
  const auto ds = build_dataset(corpus, ConditionGrid::standard(2), Seeds{}, std::nullopt, 2);
  for (auto v : {KeyVariant::kOriginal, KeyVariant::kRekeyed}) {
    EXPECT_EQ(ds.count(1, v), 50u);
    EXPECT_EQ(ds.count(2, v), 200u);
  }
}

TEST(Dataset, ProvenanceDescribesEachEntry) {
  const auto& ds = small_set().dataset;
  const Seeds seeds;
  for (const auto& e : ds.entries) {
    const auto& p = e.provenance;
    EXPECT_EQ(p.k0, seeds.k0);
    EXPECT_EQ(p.k, p.variant == KeyVariant::kOriginal ? seeds.k : seeds.k_prime);
    EXPECT_EQ(p.qf_chain.size(), static_cast<std::size_t>(p.compressions + 1));
    EXPECT_EQ(p.n_fixed, 30u);
    EXPECT_EQ(provenance_from_json(to_json(p), p.origin), p);
    EXPECT_EQ(jpeg::read_quant_tables(e.jpeg)[0],
              jpeg::scale_quant_table(jpeg::annex_k_luma_table(), jpeg::QualityFactor(p.qf_chain.back())));
  }
}

TEST(Dataset, ParallelBuildIsIdentical) {
  const auto corpus = synthesize_corpus(3, 8, 64, 48);
  const auto a = build_dataset(corpus, ConditionGrid::standard(1), Seeds{}, std::nullopt, 1);
  const auto b = build_dataset(corpus, ConditionGrid::standard(1), Seeds{}, std::nullopt, 3);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].id, b.entries[i].id);
    EXPECT_EQ(a.entries[i].jpeg, b.entries[i].jpeg);
  }
}

TEST(Dataset, EqualKeysRejected) {
  const auto corpus = synthesize_corpus(1, 1, 64, 48);
  EXPECT_THROW(build_dataset(corpus, ConditionGrid::standard(2), Seeds{1, 2, 2}), Error);
}

TEST(PrScore, Percentages) {
  EXPECT_EQ(PrScore{}.precision(), std::nullopt);
  EXPECT_EQ((PrScore{3, 1, 0}.precision()), 75.0);
  EXPECT_EQ((PrScore{3, 1, 1}.recall()), 75.0);
  EXPECT_EQ((PrScore{0, 0, 4}.recall()), 0.0);
}

TEST(Identification, TruePairsEqualQueriesTimesSecondQfs) {
  const auto& f = small_set().features;
  for (auto mode : {KeyMode::kSameKey, KeyMode::kRekeyed}) {
    for (auto scheme : {Scheme::kProposed, Scheme::kDcSign}) {
      const auto ev = run_identification(f, {30, 150}, mode, scheme);
      EXPECT_EQ(ev.queries, 8u);
      EXPECT_EQ(ev.candidates, 32u);
      EXPECT_EQ(ev.true_pairs, 32u);
      EXPECT_EQ(ev.pairwise.tp + ev.pairwise.fn, 32u);
      EXPECT_EQ(ev.per_query.tp + ev.per_query.fp + ev.per_query.fn, 8u);
    }
  }
}

TEST(Identification, ProposedSchemeIsPerfectAndKeyIndependent) {
  const auto& f = small_set().features;
  const auto same = run_identification(f, {30, 150}, KeyMode::kSameKey);
  const auto rekeyed = run_identification(f, {30, 150}, KeyMode::kRekeyed);
  EXPECT_EQ(same.pairwise, (PrScore{32, 0, 0}));
  EXPECT_EQ(rekeyed.pairwise, same.pairwise);
}

TEST(Identification, SignBaselineFailsAfterRekeying) {
  const auto ev = run_identification(small_set().features, {30, 150}, KeyMode::kRekeyed, Scheme::kDcSign);
  EXPECT_EQ(ev.pairwise.tp, 0u);
}

TEST(Identification, InvariantUnderScanOrder) {
  auto f = small_set().features;
  const auto base = run_identification(f, {30, 150}, KeyMode::kRekeyed);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(f.begin(), f.end(), rng);
    EXPECT_EQ(run_identification(f, {30, 150}, KeyMode::kRekeyed).pairwise, base.pairwise);
  }
}

TEST(Identification, NBeyondStoredLengthRejected) {
  const auto& f = small_set().features;
  EXPECT_THROW(run_identification(f, {max_feature_length(f) + 1, 150}, KeyMode::kSameKey), Error);
}

TEST(SweepN, SingleBlockKeepsRecallButLosesPrecision) {
  const auto& f = small_set().features;
  const std::vector<std::size_t> ns{1, 30, max_feature_length(f)};
  const auto rows = sweep_n(f, {30, 150}, ns, KeyMode::kSameKey);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].evaluation.pairwise.recall(), 100.0);
  EXPECT_LT(*rows[0].evaluation.pairwise.precision(), 100.0);
  EXPECT_GE(*rows[2].evaluation.pairwise.precision(), *rows[1].evaluation.pairwise.precision());
  EXPECT_EQ(max_feature_length(f), 300u);
  EXPECT_EQ(min_encryption_n(f), 30u);
}

TEST(Calibrate, FindsSmallestPerfectThreshold) {
  const auto& f = small_set().features;
  const auto cal = calibrate(f, 30, KeyMode::kRekeyed, 200, 5);
  ASSERT_TRUE(cal.smallest_perfect.has_value());
  EXPECT_LE(*cal.smallest_perfect, 150);
  EXPECT_EQ(cal.rows.size(), 41u);
  for (const auto& row : cal.rows) {
    const bool perfect = row.evaluation.pairwise.fp == 0 && row.evaluation.pairwise.fn == 0;
    if (row.threshold < *cal.smallest_perfect) {
      EXPECT_FALSE(perfect) << row.threshold;
    } else if (row.threshold == *cal.smallest_perfect) {
      EXPECT_TRUE(perfect);
    }
  }
  EXPECT_THROW(calibrate(f, 30, KeyMode::kRekeyed, 10, 0), Error);
}

TEST(DatasetFiles, WriteThenLoadGivesSameScores) {
  test::ScopedTempDir dir;
  const auto& s = small_set();
  const auto records = write_dataset(s.dataset, s.features, dir.path);
  EXPECT_EQ(records.size(), s.dataset.entries.size());
  EXPECT_TRUE(std::filesystem::exists(dir.path / "manifest.jsonl"));
  const auto loaded = load_labeled_features(dir.path / "manifest.jsonl");
  ASSERT_EQ(loaded.size(), s.features.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    EXPECT_EQ(loaded[i].magnitude.values, s.features[i].magnitude.values);
    EXPECT_EQ(loaded[i].provenance, s.features[i].provenance);
  }
  EXPECT_EQ(run_identification(loaded, {30, 150}, KeyMode::kRekeyed),
            run_identification(s.features, {30, 150}, KeyMode::kRekeyed));
}

TEST(Report, DeterministicAndComplete) {
  BenchConfig cfg;
  cfg.count = 3;
  cfg.width = 96;
  cfg.height = 64;
  cfg.conditions = {2};
  cfg.sweep = {1, 9};
  const auto a = run_bench(cfg), b = run_bench(cfg);
  EXPECT_EQ(render_text(a), render_text(b));
  EXPECT_EQ(render_json(a), render_json(b));
  EXPECT_EQ(a.rows.size(), 4u);
  EXPECT_EQ(a.sweep.size(), 4u);
  EXPECT_EQ(a.n_fixed, 9u);
  ASSERT_NE(a.find(2, Scheme::kProposed, KeyMode::kRekeyed), nullptr);
  const auto json = nlohmann::json::parse(render_json(a));
  EXPECT_EQ(json["rows"].size(), 4u);
  EXPECT_EQ(json["rows"][0]["evaluation"]["pairwise"]["tp"], 12);
  const auto text = render_text(a);
  EXPECT_NE(text.find("proposed  (2)"), std::string::npos) << text;
  EXPECT_EQ(format_percent(std::nullopt), "n/a");
  EXPECT_EQ(format_percent(100.0), "100.00");
}

}  // namespace
}  // namespace etcid::bench
