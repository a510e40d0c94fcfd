// SPDX-License-Identifier: Apache-2.0
#include "etcid/bench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "etcid/error.hpp"

namespace etcid::bench {
namespace {

std::string qf_chain(const ConditionGrid& g) {
  std::string s = std::to_string(g.qf_original) + " / " + std::to_string(g.qf_first) + " / ";
  for (std::size_t i = 0; i < g.qf_second.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(g.qf_second[i]);
  }
  return s;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

nlohmann::ordered_json score_json(const PrScore& s) {
  nlohmann::ordered_json j;
  j["tp"] = s.tp;
  j["fp"] = s.fp;
  j["fn"] = s.fn;
  const auto p = s.precision(), r = s.recall();
  j["p"] = p ? nlohmann::ordered_json(*p) : nlohmann::ordered_json(nullptr);
  j["r"] = r ? nlohmann::ordered_json(*r) : nlohmann::ordered_json(nullptr);
  return j;
}

nlohmann::ordered_json evaluation_json(const Evaluation& e) {
  nlohmann::ordered_json j;
  j["queries"] = e.queries;
  j["candidates"] = e.candidates;
  j["true_pairs"] = e.true_pairs;
  j["pairwise"] = score_json(e.pairwise);
  j["per_query"] = score_json(e.per_query);
  return j;
}

}  // namespace

std::string format_percent(std::optional<double> value) {
  if (!value) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *value);
  return buf;
}

const ReportRow* BenchReport::find(int condition, Scheme scheme, KeyMode mode) const {
  for (const auto& r : rows) {
    if (r.condition == condition && r.scheme == scheme && r.mode == mode) return &r;
  }
  return nullptr;
}

BenchReport run_bench(const BenchConfig& config) {
  if (config.count == 0) throw Error(ErrorKind::kInvalidArgument, "bench needs at least one image");
  const auto corpus = config.corpus ? load_corpus(*config.corpus, config.count)
                                    : synthesize_corpus(config.count, config.corpus_seed, config.width,
                                                        config.height);
  BenchReport report;
  report.images = corpus.size();
  report.threshold = config.threshold;
  report.corpus = config.corpus ? config.corpus->filename().string()
                                : "synthetic(seed=" + std::to_string(config.corpus_seed) + ", " +
                                      std::to_string(config.width) + "x" + std::to_string(config.height) + ")";

  for (const int condition : config.conditions) {
    const auto grid = ConditionGrid::standard(condition);
    const auto dataset = build_dataset(corpus, grid, config.seeds, config.n_fixed, config.jobs);
    const auto features = extract_features(dataset, config.jobs);
    const std::size_t n = config.n_fixed.value_or(min_encryption_n(features));
    report.n_fixed = n;
    const feature::IdentificationParams params{n, config.threshold};
    for (const Scheme scheme : {Scheme::kProposed, Scheme::kDcSign}) {
      for (const KeyMode mode : config.modes) {
        report.rows.push_back({condition, grid, scheme, mode, run_identification(features, params, mode, scheme)});
      }
    }
    for (const KeyMode mode : config.modes) {
      for (const auto& row : sweep_n(features, params, config.sweep, mode)) {
        report.sweep.push_back({condition, mode, row.n_fixed, row.evaluation});
      }
    }
  }
  return report;
}

std::string render_text(const BenchReport& report) {
  std::ostringstream out;
  out << "Identification of double-compressed encrypted JPEG images\n";
  out << "corpus: " << report.corpus << "  images: " << report.images << "  N: " << report.n_fixed
      << "  d: " << report.threshold << "\n";
  out << "counting: pairwise over (query E1(k), candidate E2) decisions\n\n";

  out << pad("scheme", 10) << pad("cond", 6) << pad("QF (O / E1 / E2)", 26) << pad("k=k'", 18) << "k!=k'\n";
  out << pad("", 42) << pad("p[%]", 9) << pad("r[%]", 9) << pad("p[%]", 9) << "r[%]\n";
  std::vector<std::pair<int, Scheme>> seen;
  for (const auto& row : report.rows) {
    const std::pair key{row.condition, row.scheme};
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    out << pad(to_string(row.scheme), 10) << pad("(" + std::to_string(row.condition) + ")", 6)
        << pad(qf_chain(row.grid), 26);
    for (const KeyMode mode : {KeyMode::kSameKey, KeyMode::kRekeyed}) {
      const auto* r = report.find(row.condition, row.scheme, mode);
      const auto p = r ? format_percent(r->evaluation.pairwise.precision()) : std::string("-");
      const auto rc = r ? format_percent(r->evaluation.pairwise.recall()) : std::string("-");
      out << pad(p, 9) << pad(rc, 9);
    }
    out << "\n";
  }

  out << "\ncounts\n";
  out << pad("scheme", 10) << pad("cond", 6) << pad("mode", 9) << lpad("queries", 8) << lpad("cands", 7)
      << lpad("TP", 7) << lpad("FP", 7) << lpad("FN", 7) << "   per-query TP/FP/FN\n";
  for (const auto& row : report.rows) {
    const auto& e = row.evaluation;
    out << pad(to_string(row.scheme), 10) << pad("(" + std::to_string(row.condition) + ")", 6)
        << pad(to_string(row.mode), 9) << lpad(std::to_string(e.queries), 8)
        << lpad(std::to_string(e.candidates), 7) << lpad(std::to_string(e.pairwise.tp), 7)
        << lpad(std::to_string(e.pairwise.fp), 7) << lpad(std::to_string(e.pairwise.fn), 7) << "   "
        << e.per_query.tp << "/" << e.per_query.fp << "/" << e.per_query.fn << "\n";
  }

  if (!report.sweep.empty()) {
    out << "\nN sweep (proposed)\n";
    out << pad("cond", 6) << pad("mode", 9) << lpad("N", 6) << lpad("p[%]", 9) << lpad("r[%]", 9)
        << lpad("TP", 7) << lpad("FP", 7) << lpad("FN", 7) << "\n";
    for (const auto& s : report.sweep) {
      const auto& pw = s.evaluation.pairwise;
      out << pad("(" + std::to_string(s.condition) + ")", 6) << pad(to_string(s.mode), 9)
          << lpad(std::to_string(s.n_fixed), 6) << lpad(format_percent(pw.precision()), 9)
          << lpad(format_percent(pw.recall()), 9) << lpad(std::to_string(pw.tp), 7)
          << lpad(std::to_string(pw.fp), 7) << lpad(std::to_string(pw.fn), 7) << "\n";
    }
  }
  std::string text = out.str();
  std::string trimmed;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string line = text.substr(start, end - start);
    line.erase(line.find_last_not_of(' ') + 1);
    trimmed += line + "\n";
    start = end + 1;
  }
  return trimmed;
}

std::string render_json(const BenchReport& report) {
  nlohmann::ordered_json j;
  j["corpus"] = report.corpus;
  j["images"] = report.images;
  j["n"] = report.n_fixed;
  j["d"] = report.threshold;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["condition"] = row.condition;
    r["qf_original"] = row.grid.qf_original;
    r["qf_first"] = row.grid.qf_first;
    r["qf_second"] = row.grid.qf_second;
    r["scheme"] = to_string(row.scheme);
    r["mode"] = to_string(row.mode);
    r["evaluation"] = evaluation_json(row.evaluation);
    j["rows"].push_back(std::move(r));
  }
  j["sweep"] = nlohmann::ordered_json::array();
  for (const auto& s : report.sweep) {
    nlohmann::ordered_json r;
    r["condition"] = s.condition;
    r["mode"] = to_string(s.mode);
    r["n"] = s.n_fixed;
    r["evaluation"] = evaluation_json(s.evaluation);
    j["sweep"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

}  // namespace etcid::bench
