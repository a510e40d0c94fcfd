// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "etcid/bench/harness.hpp"

namespace etcid::bench {

struct BenchConfig {
  std::vector<int> conditions = {1, 2, 3};
  std::size_t count = 50;
  Seeds seeds;
  int threshold = 150;
  std::optional<std::size_t> n_fixed;         // default floor(M/10)
  std::optional<std::filesystem::path> corpus; // synthetic corpus when absent
  std::uint64_t corpus_seed = 2024;
  int width = 640;
  int height = 480;
  std::vector<KeyMode> modes = {KeyMode::kSameKey, KeyMode::kRekeyed};
  std::vector<std::size_t> sweep;  // extra N values evaluated per condition
  std::size_t jobs = 1;
};

struct ReportRow {
  int condition = 0;
  ConditionGrid grid;
  Scheme scheme = Scheme::kProposed;
  KeyMode mode = KeyMode::kSameKey;
  Evaluation evaluation;
};

struct SweepReportRow {
  int condition = 0;
  KeyMode mode = KeyMode::kSameKey;
  std::size_t n_fixed = 0;
  Evaluation evaluation;
};

struct BenchReport {
  std::size_t images = 0;
  std::size_t n_fixed = 0;
  int threshold = 0;
  std::string corpus;
  std::vector<ReportRow> rows;
  std::vector<SweepReportRow> sweep;

  const ReportRow* find(int condition, Scheme scheme, KeyMode mode) const;
};

/// Builds the dataset for each condition, extracts features and scores both
/// schemes in every requested key mode. Output is a pure function of `config`.
BenchReport run_bench(const BenchConfig& config);

/// Table layout: one line per scheme and condition, p/r for each key mode.
std::string render_text(const BenchReport& report);
std::string render_json(const BenchReport& report);

/// "100.00" or "n/a".
std::string format_percent(std::optional<double> value);

}  // namespace etcid::bench
