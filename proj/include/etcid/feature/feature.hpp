// SPDX-License-Identifier: Apache-2.0
//
// Identification features of encrypted JPEG images and threshold matching.
//
// The feature of an image is |DC| of its first N luminance blocks. Two images
// are judged to share an origin when every one of the N entries differs by at
// most d.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etcid/jpeg/dc.hpp"

namespace etcid::feature {

struct FeatureVector {
  std::string image_id;
  std::vector<std::uint16_t> values;  // each in [0, 1024]

  std::size_t size() const noexcept { return values.size(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct IdentificationParams {
  std::size_t n_fixed = 480;
  int threshold = 150;  // d
};

/// Throws ErrorKind::kInvalidArgument unless N >= 1 and d >= 0.
void validate(const IdentificationParams& params);

/// |dc(n)| for n < N. Throws ErrorKind::kInvalidArgument if N is 0 or exceeds M.
FeatureVector feature_from_dc(const jpeg::DcVector& dc, std::size_t n_fixed, std::string image_id = {});

/// Decodes the JPEG and takes the feature of its luminance DC values.
FeatureVector extract_feature(std::span<const std::uint8_t> jpeg, std::size_t n_fixed,
                              std::string image_id = {});

struct Comparison {
  bool accepted = false;
  std::size_t evaluated = 0;  // element comparisons performed before the verdict
};

/// Accepts iff |query(n) - candidate(n)| <= d for all n < N, stopping at the
/// first violation. Throws ErrorKind::kInvalidArgument if either vector is
/// shorter than N.
Comparison compare(const FeatureVector& query, const FeatureVector& candidate,
                   const IdentificationParams& params);

struct MatchVerdict {
  std::string query_id;
  std::vector<bool> decisions;              // one per database entry, scan order
  std::vector<std::size_t> matched_indices; // accepting entries, scan order
  std::vector<std::string> matched_ids;

  bool matched() const noexcept { return !matched_indices.empty(); }
  /// The entry at which a halting scan would stop.
  std::optional<std::size_t> first_match() const {
    if (matched_indices.empty()) return std::nullopt;
    return matched_indices.front();
  }
};

/// Compares the query with every database entry in order and records all
/// accepting entries.
MatchVerdict identify(const FeatureVector& query, std::span<const FeatureVector> database,
                      const IdentificationParams& params);

/// Sign-of-DC feature used as a comparison baseline: 1 where DC < 0.
struct SignVector {
  std::string image_id;
  std::vector<std::uint8_t> bits;

  friend bool operator==(const SignVector&, const SignVector&) = default;
};

SignVector sign_from_dc(const jpeg::DcVector& dc, std::size_t n_fixed, std::string image_id = {});
SignVector extract_sign_feature(std::span<const std::uint8_t> jpeg, std::size_t n_fixed,
                                std::string image_id = {});

/// Number of differing bits among the first N.
std::size_t hamming_distance(const SignVector& a, const SignVector& b, std::size_t n_fixed);
/// Baseline rule: all N bits equal.
bool sign_match(const SignVector& a, const SignVector& b, std::size_t n_fixed);

}  // namespace etcid::feature
