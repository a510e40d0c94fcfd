// SPDX-License-Identifier: Apache-2.0
#include "etcid/feature/feature.hpp"

#include <cstdlib>

#include "etcid/error.hpp"
#include "etcid/jpeg/codec.hpp"

namespace etcid::feature {
namespace {

void check_length(const jpeg::DcVector& dc, std::size_t n_fixed) {
  if (n_fixed == 0 || n_fixed > dc.size()) {
    throw Error(ErrorKind::kInvalidArgument, "N must be in [1, M]; got N=" +
                                                 std::to_string(n_fixed) +
                                                 ", M=" + std::to_string(dc.size()));
  }
}

}  // namespace

void validate(const IdentificationParams& params) {
  if (params.n_fixed < 1) throw Error(ErrorKind::kInvalidArgument, "N must be at least 1");
  if (params.threshold < 0) throw Error(ErrorKind::kInvalidArgument, "d must be non-negative");
}

FeatureVector feature_from_dc(const jpeg::DcVector& dc, std::size_t n_fixed, std::string image_id) {
  check_length(dc, n_fixed);
  FeatureVector out{std::move(image_id), std::vector<std::uint16_t>(n_fixed)};
  for (std::size_t n = 0; n < n_fixed; ++n) {
    out.values[n] = static_cast<std::uint16_t>(std::abs(dc.values[n]));
  }
  return out;
}

FeatureVector extract_feature(std::span<const std::uint8_t> jpeg, std::size_t n_fixed,
                              std::string image_id) {
  return feature_from_dc(jpeg::extract_dc_luma(jpeg::decode_jpeg(jpeg)), n_fixed, std::move(image_id));
}

Comparison compare(const FeatureVector& query, const FeatureVector& candidate,
                   const IdentificationParams& params) {
  validate(params);
  if (query.size() < params.n_fixed || candidate.size() < params.n_fixed) {
    throw Error(ErrorKind::kInvalidArgument,
                "feature length mismatch: need " + std::to_string(params.n_fixed) + ", have " +
                    std::to_string(query.size()) + " and " + std::to_string(candidate.size()));
  }
  for (std::size_t n = 0; n < params.n_fixed; ++n) {
    if (std::abs(int{query.values[n]} - int{candidate.values[n]}) > params.threshold) {
      return {false, n + 1};
    }
  }
  return {true, params.n_fixed};
}

MatchVerdict identify(const FeatureVector& query, std::span<const FeatureVector> database,
                      const IdentificationParams& params) {
  MatchVerdict verdict;
  verdict.query_id = query.image_id;
  verdict.decisions.reserve(database.size());
  for (std::size_t i = 0; i < database.size(); ++i) {
    const bool accepted = compare(query, database[i], params).accepted;
    verdict.decisions.push_back(accepted);
    if (accepted) {
      verdict.matched_indices.push_back(i);
      verdict.matched_ids.push_back(database[i].image_id);
    }
  }
  return verdict;
}

SignVector sign_from_dc(const jpeg::DcVector& dc, std::size_t n_fixed, std::string image_id) {
  check_length(dc, n_fixed);
  SignVector out{std::move(image_id), std::vector<std::uint8_t>(n_fixed)};
  for (std::size_t n = 0; n < n_fixed; ++n) out.bits[n] = dc.values[n] < 0 ? 1 : 0;
  return out;
}

SignVector extract_sign_feature(std::span<const std::uint8_t> jpeg, std::size_t n_fixed,
                                std::string image_id) {
  return sign_from_dc(jpeg::extract_dc_luma(jpeg::decode_jpeg(jpeg)), n_fixed, std::move(image_id));
}

std::size_t hamming_distance(const SignVector& a, const SignVector& b, std::size_t n_fixed) {
  if (a.bits.size() < n_fixed || b.bits.size() < n_fixed) {
    throw Error(ErrorKind::kInvalidArgument, "sign vector shorter than N");
  }
  std::size_t distance = 0;
  for (std::size_t n = 0; n < n_fixed; ++n) distance += a.bits[n] != b.bits[n];
  return distance;
}

bool sign_match(const SignVector& a, const SignVector& b, std::size_t n_fixed) {
  return hamming_distance(a, b, n_fixed) == 0;
}

}  // namespace etcid::feature
