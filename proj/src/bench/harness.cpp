// SPDX-License-Identifier: Apache-2.0
#include "etcid/bench/harness.hpp"

#include <algorithm>
#include <cstdio>

#include "etcid/cipher/etc.hpp"
#include "etcid/error.hpp"
#include "etcid/feature/feature_file.hpp"
#include "etcid/image/pnm.hpp"
#include "etcid/jpeg/dc.hpp"
#include "parallel.hpp"

namespace etcid::bench {
namespace {

std::string entry_id(std::size_t origin, int j, KeyVariant variant, int qf) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "o%04zu_j%d_%s_q%d", origin, j,
                variant == KeyVariant::kOriginal ? "k" : "kp", qf);
  return buf;
}

std::optional<double> percentage(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

// The entries generated from one source image, in manifest order.
std::vector<DatasetEntry> entries_for_origin(const PixelImage& original_pixels, std::size_t origin,
                                             const ConditionGrid& grid, const Seeds& seeds,
                                             std::optional<std::size_t> n_fixed) {
  const cipher::KeySet keys(seeds.k0, seeds.k);
  const cipher::KeySet keys_prime(seeds.k0, seeds.k_prime);
  const std::size_t m = original_pixels.block_count();
  const cipher::EncryptionParams params =
      n_fixed ? cipher::EncryptionParams{*n_fixed} : cipher::EncryptionParams::default_for(m);
  cipher::validate(params, m);

  const jpeg::QualityFactor q1(grid.qf_first);
  const auto e1_k = jpeg::encode_jpeg(cipher::encrypt(original_pixels, keys, params), q1);
  const auto e1_kp = jpeg::encode_jpeg(cipher::encrypt(original_pixels, keys_prime, params), q1);
  const auto e1_k_pixels = jpeg::decode_jpeg(e1_k);
  const auto e1_kp_from_k = cipher::re_encrypt(e1_k_pixels, keys, keys_prime, params);

  auto record = [&](int j, KeyVariant v, std::vector<int> chain) {
    return ProvenanceRecord{origin,
                            j,
                            seeds.k0,
                            v == KeyVariant::kOriginal ? seeds.k : seeds.k_prime,
                            v,
                            std::move(chain),
                            params.n_fixed};
  };

  std::vector<DatasetEntry> out;
  out.push_back({entry_id(origin, 1, KeyVariant::kOriginal, grid.qf_first),
                 record(1, KeyVariant::kOriginal, {grid.qf_original, grid.qf_first}), e1_k});
  out.push_back({entry_id(origin, 1, KeyVariant::kRekeyed, grid.qf_first),
                 record(1, KeyVariant::kRekeyed, {grid.qf_original, grid.qf_first}), e1_kp});
  for (const int q2 : grid.qf_second) {
    out.push_back({entry_id(origin, 2, KeyVariant::kOriginal, q2),
                   record(2, KeyVariant::kOriginal, {grid.qf_original, grid.qf_first, q2}),
                   jpeg::encode_jpeg(e1_k_pixels, jpeg::QualityFactor(q2))});
  }
  for (const int q2 : grid.qf_second) {
    out.push_back({entry_id(origin, 2, KeyVariant::kRekeyed, q2),
                   record(2, KeyVariant::kRekeyed, {grid.qf_original, grid.qf_first, q2}),
                   jpeg::encode_jpeg(e1_kp_from_k, jpeg::QualityFactor(q2))});
  }
  return out;
}

bool is_query(const ProvenanceRecord& p) {
  return p.compressions == 1 && p.variant == KeyVariant::kOriginal;
}

bool is_candidate(const ProvenanceRecord& p, KeyMode mode) {
  const auto wanted = mode == KeyMode::kSameKey ? KeyVariant::kOriginal : KeyVariant::kRekeyed;
  return p.compressions == 2 && p.variant == wanted;
}

}  // namespace

ConditionGrid ConditionGrid::standard(int condition) {
  switch (condition) {
    case 1:
      return {95, 95, {85, 80, 75, 70}};
    case 2:
      return {85, 85, {85, 80, 75, 70}};
    case 3:
      return {75, 75, {85, 80, 75, 70}};
    default:
      throw Error(ErrorKind::kInvalidArgument, "condition must be 1, 2 or 3");
  }
}

void ConditionGrid::validate() const {
  jpeg::QualityFactor{qf_original};
  jpeg::QualityFactor{qf_first};
  if (qf_second.empty()) throw Error(ErrorKind::kInvalidArgument, "qf_second must not be empty");
  for (const int q : qf_second) jpeg::QualityFactor{q};
}

const char* to_string(KeyVariant v) { return v == KeyVariant::kOriginal ? "k" : "k'"; }
const char* to_string(KeyMode m) { return m == KeyMode::kSameKey ? "same" : "rekeyed"; }
const char* to_string(Scheme s) { return s == Scheme::kProposed ? "proposed" : "dc-sign"; }

nlohmann::json to_json(const ProvenanceRecord& p) {
  return {{"j", p.compressions},
          {"k0", p.k0},
          {"k", p.k},
          {"variant", to_string(p.variant)},
          {"qf", p.qf_chain},
          {"n", p.n_fixed}};
}

ProvenanceRecord provenance_from_json(const nlohmann::json& j, std::size_t origin) {
  try {
    ProvenanceRecord p;
    p.origin = origin;
    p.compressions = j.at("j").get<int>();
    p.k0 = j.at("k0").get<std::uint64_t>();
    p.k = j.at("k").get<std::uint64_t>();
    const auto variant = j.at("variant").get<std::string>();
    if (variant != "k" && variant != "k'") throw Error(ErrorKind::kFormat, "bad key variant " + variant);
    p.variant = variant == "k" ? KeyVariant::kOriginal : KeyVariant::kRekeyed;
    p.qf_chain = j.at("qf").get<std::vector<int>>();
    p.n_fixed = j.at("n").get<std::size_t>();
    if (p.compressions != 1 && p.compressions != 2) {
      throw Error(ErrorKind::kFormat, "compression count must be 1 or 2");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("provenance: ") + e.what());
  }
}

std::size_t Dataset::count(int compressions, KeyVariant variant) const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [&](const DatasetEntry& e) {
    return e.provenance.compressions == compressions && e.provenance.variant == variant;
  }));
}

Dataset build_dataset(std::span<const CorpusImage> corpus, const ConditionGrid& grid, const Seeds& seeds,
                      std::optional<std::size_t> n_fixed, std::size_t jobs) {
  grid.validate();
  if (seeds.k == seeds.k_prime) {
    throw Error(ErrorKind::kKey, "k and k' must differ for the re-keyed variant");
  }
  Dataset ds;
  ds.grid = grid;
  ds.seeds = seeds;
  ds.originals.resize(corpus.size());
  std::vector<std::vector<DatasetEntry>> per_origin(corpus.size());
  detail::parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    const auto& src = corpus[i].pixels;
    require_block_aligned(src, "build_dataset");
    ds.originals[i] = jpeg::encode_jpeg(src, jpeg::QualityFactor(grid.qf_original));
    per_origin[i] = entries_for_origin(jpeg::decode_jpeg(ds.originals[i]), i, grid, seeds, n_fixed);
  });
  for (auto& group : per_origin) {
    std::move(group.begin(), group.end(), std::back_inserter(ds.entries));
  }
  return ds;
}

std::vector<LabeledFeatures> extract_features(const Dataset& dataset, std::size_t jobs) {
  std::vector<LabeledFeatures> out(dataset.entries.size());
  detail::parallel_for(out.size(), jobs, [&](std::size_t i) {
    const auto& e = dataset.entries[i];
    const auto dc = jpeg::extract_dc_luma(jpeg::decode_jpeg(e.jpeg));
    out[i] = {e.id, e.provenance, feature::feature_from_dc(dc, dc.size(), e.id),
              feature::sign_from_dc(dc, dc.size(), e.id)};
  });
  return out;
}

std::vector<feature::ManifestRecord> write_dataset(const Dataset& dataset,
                                                   std::span<const LabeledFeatures> features,
                                                   const std::filesystem::path& dir) {
  if (features.size() != dataset.entries.size()) {
    throw Error(ErrorKind::kInvalidArgument, "feature list does not match dataset entries");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir / "images", ec);
  if (!ec) std::filesystem::create_directories(dir / "features", ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<feature::ManifestRecord> records;
  for (std::size_t i = 0; i < dataset.entries.size(); ++i) {
    const auto& e = dataset.entries[i];
    const std::string image = "images/" + e.id + ".jpg";
    const std::string feat = "features/" + e.id + ".etcf";
    write_file(dir / image, e.jpeg);
    feature::write_feature_file(dir / feat, features[i].magnitude.values);
    records.push_back({e.id, image, feat, static_cast<long>(e.provenance.origin), to_json(e.provenance)});
  }
  feature::write_manifest(dir / "manifest.jsonl", records);
  return records;
}

std::vector<LabeledFeatures> load_labeled_features(const std::filesystem::path& manifest) {
  std::vector<LabeledFeatures> out;
  for (const auto& r : feature::read_manifest(manifest)) {
    if (r.origin < 0) throw Error(ErrorKind::kFormat, "manifest record " + r.id + " has no origin");
    LabeledFeatures lf;
    lf.id = r.id;
    lf.provenance = provenance_from_json(r.meta, static_cast<std::size_t>(r.origin));
    lf.magnitude = {r.id, feature::read_feature_file(feature::resolve_manifest_path(manifest, r.feature_path))};
    out.push_back(std::move(lf));
  }
  return out;
}

std::optional<double> PrScore::precision() const { return percentage(tp, tp + fp); }
std::optional<double> PrScore::recall() const { return percentage(tp, tp + fn); }

Evaluation run_identification(std::span<const LabeledFeatures> features,
                              const feature::IdentificationParams& params, KeyMode mode, Scheme scheme) {
  feature::validate(params);
  std::vector<const LabeledFeatures*> queries, candidates;
  for (const auto& f : features) {
    if (is_query(f.provenance)) queries.push_back(&f);
    if (is_candidate(f.provenance, mode)) candidates.push_back(&f);
  }
  for (const auto& group : {queries, candidates}) {
    for (const auto* f : group) {
      const std::size_t length = scheme == Scheme::kProposed ? f->magnitude.size() : f->sign.bits.size();
      if (length < params.n_fixed) {
        throw Error(ErrorKind::kInvalidArgument,
                    "N=" + std::to_string(params.n_fixed) + " exceeds stored feature length " +
                        std::to_string(length) + " of " + f->id);
      }
    }
  }

  Evaluation ev;
  ev.queries = queries.size();
  ev.candidates = candidates.size();
  for (const auto* q : queries) {
    std::optional<bool> first_correct;
    for (const auto* c : candidates) {
      const bool truth = q->provenance.origin == c->provenance.origin;
      const bool accepted = scheme == Scheme::kProposed
                                ? feature::compare(q->magnitude, c->magnitude, params).accepted
                                : feature::sign_match(q->sign, c->sign, params.n_fixed);
      ev.true_pairs += truth;
      if (accepted && truth) ++ev.pairwise.tp;
      if (accepted && !truth) ++ev.pairwise.fp;
      if (!accepted && truth) ++ev.pairwise.fn;
      if (accepted && !first_correct) first_correct = truth;
    }
    if (!first_correct) {
      ++ev.per_query.fn;
    } else if (*first_correct) {
      ++ev.per_query.tp;
    } else {
      ++ev.per_query.fp;
    }
  }
  return ev;
}

std::vector<SweepRow> sweep_n(std::span<const LabeledFeatures> features,
                              const feature::IdentificationParams& params,
                              std::span<const std::size_t> n_values, KeyMode mode) {
  std::vector<SweepRow> rows;
  for (const std::size_t n : n_values) {
    auto p = params;
    p.n_fixed = n;
    rows.push_back({n, run_identification(features, p, mode)});
  }
  return rows;
}

Calibration calibrate(std::span<const LabeledFeatures> features, std::size_t n_fixed, KeyMode mode,
                      int d_max, int step) {
  if (step < 1 || d_max < 0) throw Error(ErrorKind::kInvalidArgument, "calibration range is empty");
  Calibration cal;
  for (int d = 0; d <= d_max; d += step) {
    auto ev = run_identification(features, {n_fixed, d}, mode);
    const auto p = ev.pairwise.precision(), r = ev.pairwise.recall();
    if (!cal.smallest_perfect && p && r && *p == 100.0 && *r == 100.0) cal.smallest_perfect = d;
    cal.rows.push_back({d, ev});
  }
  return cal;
}

std::size_t max_feature_length(std::span<const LabeledFeatures> features) {
  std::size_t n = features.empty() ? 0 : SIZE_MAX;
  for (const auto& f : features) n = std::min(n, f.magnitude.size());
  return n;
}

std::size_t min_encryption_n(std::span<const LabeledFeatures> features) {
  std::size_t n = features.empty() ? 0 : SIZE_MAX;
  for (const auto& f : features) n = std::min(n, f.provenance.n_fixed);
  return n;
}

}  // namespace etcid::bench
