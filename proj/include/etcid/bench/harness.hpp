// SPDX-License-Identifier: Apache-2.0
//
// Recompression / re-encryption identification experiment.
//
// For each source image O_i:
//   original      O_i         = JPEG(source, qf_original)
//   j = 1, k      E1(k)       = JPEG(encrypt(O_i; k0, k),  qf_first)
//   j = 1, k'     E1(k')      = JPEG(encrypt(O_i; k0, k'), qf_first)
//   j = 2, k      E2(k, q)    = JPEG(decode(E1(k)), q)                     for q in qf_second
//   j = 2, k'     E2(k', q)   = JPEG(re_encrypt(decode(E1(k)); k -> k'), q)  for q in qf_second
//
// Queries are the E1(k) images; candidates are E2(k, .) for the same-key run
// and E2(k', .) for the re-keyed run. Every (query, candidate) pair is one
// decision; a pair is a true pair when both come from the same O_i.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etcid/bench/corpus.hpp"
#include "etcid/feature/feature.hpp"
#include "etcid/feature/manifest.hpp"
#include "etcid/jpeg/codec.hpp"

namespace etcid::bench {

struct ConditionGrid {
  int qf_original = 85;
  int qf_first = 85;
  std::vector<int> qf_second = {85, 80, 75, 70};

  /// Conditions (1), (2), (3): 95/95, 85/85, 75/75, each recompressed at 85, 80, 75, 70.
  static ConditionGrid standard(int condition);
  /// Throws ErrorKind::kInvalidArgument for any quality factor outside [1, 100].
  void validate() const;
};

struct Seeds {
  std::uint64_t k0 = 1;
  std::uint64_t k = 2;
  std::uint64_t k_prime = 3;
};

enum class KeyVariant { kOriginal, kRekeyed };  // encrypted with k / with k'
enum class KeyMode { kSameKey, kRekeyed };      // candidate pool for a run
enum class Scheme { kProposed, kDcSign };

const char* to_string(KeyVariant v);
const char* to_string(KeyMode m);
const char* to_string(Scheme s);

struct ProvenanceRecord {
  std::size_t origin = 0;
  int compressions = 1;  // j
  std::uint64_t k0 = 0;
  std::uint64_t k = 0;
  KeyVariant variant = KeyVariant::kOriginal;
  std::vector<int> qf_chain;  // qf_original, qf_first[, qf_second]
  std::size_t n_fixed = 0;    // N used for encryption

  friend bool operator==(const ProvenanceRecord&, const ProvenanceRecord&) = default;
};

nlohmann::json to_json(const ProvenanceRecord& p);
ProvenanceRecord provenance_from_json(const nlohmann::json& j, std::size_t origin);

struct DatasetEntry {
  std::string id;
  ProvenanceRecord provenance;
  jpeg::JpegBytes jpeg;
};

struct Dataset {
  ConditionGrid grid;
  Seeds seeds;
  std::vector<jpeg::JpegBytes> originals;  // O_i
  std::vector<DatasetEntry> entries;       // per origin: E1(k), E1(k'), E2(k, .), E2(k', .)

  std::size_t count(int compressions, KeyVariant variant) const;
};

/// Encryption N for each image is `n_fixed` when given, otherwise floor(M/10).
/// Work is spread over `jobs` threads; the result does not depend on `jobs`.
Dataset build_dataset(std::span<const CorpusImage> corpus, const ConditionGrid& grid, const Seeds& seeds,
                      std::optional<std::size_t> n_fixed = std::nullopt, std::size_t jobs = 1);

/// Features of one dataset entry, full length (all M blocks).
struct LabeledFeatures {
  std::string id;
  ProvenanceRecord provenance;
  feature::FeatureVector magnitude;
  feature::SignVector sign;  // empty when loaded from a manifest
};

std::vector<LabeledFeatures> extract_features(const Dataset& dataset, std::size_t jobs = 1);

/// Writes every entry's JPEG and full-length ETCF feature under `dir` plus
/// dir/manifest.jsonl, and returns the manifest records.
std::vector<feature::ManifestRecord> write_dataset(const Dataset& dataset,
                                                   std::span<const LabeledFeatures> features,
                                                   const std::filesystem::path& dir);

/// Reads a manifest written by write_dataset and the feature files it names.
/// Throws ErrorKind::kFormat when a record lacks provenance and kIo when a
/// feature file is missing.
std::vector<LabeledFeatures> load_labeled_features(const std::filesystem::path& manifest);

/// Precision / recall counts. Percentages are absent when their denominator is zero.
struct PrScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::optional<double> precision() const;
  std::optional<double> recall() const;
  friend bool operator==(const PrScore&, const PrScore&) = default;
};

struct Evaluation {
  PrScore pairwise;   // every (query, candidate) decision
  PrScore per_query;  // first accepted candidate in scan order per query
  std::size_t queries = 0;
  std::size_t candidates = 0;
  std::size_t true_pairs = 0;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

/// Throws ErrorKind::kInvalidArgument when N exceeds a stored feature length,
/// or when the sign scheme is requested without sign features.
Evaluation run_identification(std::span<const LabeledFeatures> features,
                              const feature::IdentificationParams& params, KeyMode mode,
                              Scheme scheme = Scheme::kProposed);

struct SweepRow {
  std::size_t n_fixed;
  Evaluation evaluation;
};

std::vector<SweepRow> sweep_n(std::span<const LabeledFeatures> features,
                              const feature::IdentificationParams& params,
                              std::span<const std::size_t> n_values, KeyMode mode);

struct CalibrationRow {
  int threshold;
  Evaluation evaluation;
};

struct Calibration {
  std::vector<CalibrationRow> rows;
  std::optional<int> smallest_perfect;  // smallest d with p = r = 100%
};

/// Evaluates d = 0, step, 2*step, ... <= d_max.
Calibration calibrate(std::span<const LabeledFeatures> features, std::size_t n_fixed, KeyMode mode,
                      int d_max = 400, int step = 1);

/// Largest N the features support (minimum stored length).
std::size_t max_feature_length(std::span<const LabeledFeatures> features);
/// Smallest encryption N recorded in the provenance.
std::size_t min_encryption_n(std::span<const LabeledFeatures> features);

}  // namespace etcid::bench
