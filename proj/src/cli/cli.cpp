// SPDX-License-Identifier: Apache-2.0
#include "etcid/cli/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "etcid/bench/report.hpp"
#include "etcid/cipher/etc.hpp"
#include "etcid/cipher/key_file.hpp"
#include "etcid/error.hpp"
#include "etcid/feature/feature.hpp"
#include "etcid/feature/feature_file.hpp"
#include "etcid/feature/manifest.hpp"
#include "etcid/image/pnm.hpp"
#include "etcid/jpeg/codec.hpp"
#include "etcid/jpeg/dc.hpp"

namespace etcid::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kSeedFileEnv = "ETCIDENT_SEED_FILE";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<fs::path> seed_file_from_env() {
  const char* v = std::getenv(kSeedFileEnv);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return fs::path(v);
}

bool is_pnm_path(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

std::vector<std::uint8_t> as_bytes(const std::string& s) { return {s.begin(), s.end()}; }

PixelImage prepare_input(const fs::path& in, bool crop) {
  auto img = load_image(in);
  if (crop) return crop_to_blocks(img);
  require_block_aligned(img, in.string().c_str());
  return img;
}

// --- encrypt ----------------------------------------------------------------

struct EncryptArgs {
  std::string in, out, key_out;
  std::optional<std::string> k0, k;
  std::optional<std::size_t> n;
  int qf = 85;
  bool crop = false;
};

int cmd_encrypt(const EncryptArgs& a, std::ostream& out) {
  cipher::KeyRecord record;
  std::optional<std::size_t> n = a.n;
  if (a.k0 || a.k) {
    if (!a.k0) throw UsageError("--k0 is required");
    if (!a.k) throw UsageError("--k is required");
    record.k0 = cipher::parse_seed(*a.k0);
    record.k = cipher::parse_seed(*a.k);
  } else if (const auto file = seed_file_from_env()) {
    const auto from_file = cipher::read_key_file(*file);
    record.k0 = from_file.k0;
    record.k = from_file.k;
    if (!n) n = from_file.n_fixed;
  } else {
    throw UsageError("--k0 is required (or set " + std::string(kSeedFileEnv) + ")");
  }
  const jpeg::QualityFactor qf(a.qf);
  const auto img = prepare_input(a.in, a.crop);
  const std::size_t m = img.block_count();
  record.n_fixed = n.value_or(cipher::EncryptionParams::default_for(m).n_fixed);

  const auto encrypted = cipher::encrypt(img, record.keys(), record.params());
  write_file(a.out, jpeg::encode_jpeg(encrypted, qf));
  const fs::path key_path = a.key_out.empty() ? fs::path(a.out + ".key") : fs::path(a.key_out);
  cipher::write_key_file(key_path, record);
  out << a.out << " " << img.width() << "x" << img.height() << " M=" << m << " N=" << record.n_fixed
      << " key=" << key_path.string() << "\n";
  return kOk;
}

// --- decrypt ----------------------------------------------------------------

struct DecryptArgs {
  std::string in, out, key;
  int qf = 95;
};

int cmd_decrypt(const DecryptArgs& a, std::ostream& out) {
  fs::path key_path;
  if (!a.key.empty()) {
    key_path = a.key;
  } else if (const auto file = seed_file_from_env()) {
    key_path = *file;
  } else {
    throw UsageError("--key is required (or set " + std::string(kSeedFileEnv) + ")");
  }
  const auto record = cipher::read_key_file(key_path);
  const jpeg::QualityFactor qf(a.qf);
  const auto img = load_image(a.in);
  const auto plain = cipher::decrypt(img, record.keys(), record.params());
  if (is_pnm_path(a.out)) {
    write_file(a.out, encode_pnm(plain));
  } else {
    write_file(a.out, jpeg::encode_jpeg(plain, qf));
  }
  out << a.out << "\n";
  return kOk;
}

// --- extract ----------------------------------------------------------------

struct ExtractArgs {
  std::string in, out, text;
  std::optional<std::size_t> n;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out) {
  const auto bytes = read_file(a.in);
  const auto dc = jpeg::extract_dc_luma(jpeg::decode_jpeg(bytes));
  const std::size_t n = a.n.value_or(cipher::EncryptionParams::default_for(dc.size()).n_fixed);
  const auto f = feature::feature_from_dc(dc, n, fs::path(a.in).filename().string());
  feature::write_feature_file(a.out, f.values);
  if (!a.text.empty()) write_file(a.text, as_bytes(feature::feature_to_text(f.values)));
  out << a.out << " N=" << n << "\n";
  return kOk;
}

// --- identify ---------------------------------------------------------------

struct IdentifyArgs {
  std::string query, manifest;
  int d = 150;
  std::optional<std::size_t> n;
};

int cmd_identify(const IdentifyArgs& a, std::ostream& out) {
  feature::FeatureVector query{fs::path(a.query).stem().string(), feature::read_feature_file(a.query)};
  const auto records = feature::read_manifest(a.manifest);
  std::vector<feature::FeatureVector> db;
  db.reserve(records.size());
  for (const auto& r : records) {
    db.push_back({r.id, feature::read_feature_file(feature::resolve_manifest_path(a.manifest, r.feature_path))});
  }
  const feature::IdentificationParams params{a.n.value_or(query.size()), a.d};
  const auto verdict = feature::identify(query, db, params);
  for (const auto& id : verdict.matched_ids) out << id << "\n";
  return verdict.matched() ? kOk : kNoMatch;
}

// --- dataset / bench / calibrate --------------------------------------------

struct CorpusArgs {
  std::string corpus;
  std::size_t count = 50;
  std::uint64_t corpus_seed = 2024;
  int width = 640;
  int height = 480;
  std::string k0 = "1", k = "2", k_prime = "3";
  std::optional<std::size_t> n;
  std::size_t jobs = 1;

  bench::Seeds seeds() const {
    return {cipher::parse_seed(k0), cipher::parse_seed(k), cipher::parse_seed(k_prime)};
  }

  std::vector<bench::CorpusImage> load() const {
    if (count == 0) throw UsageError("--count must be positive");
    if (!corpus.empty()) return bench::load_corpus(corpus, count);
    return bench::synthesize_corpus(count, corpus_seed, width, height);
  }
};

void add_corpus_options(CLI::App* cmd, CorpusArgs& a) {
  cmd->add_option("--corpus", a.corpus, "Directory of JPEG/PPM/PGM source images (default: synthetic)");
  cmd->add_option("--count,--scale", a.count, "Number of source images")->capture_default_str();
  cmd->add_option("--corpus-seed", a.corpus_seed, "Seed of the synthetic corpus")->capture_default_str();
  cmd->add_option("--width", a.width, "Synthetic image width")->capture_default_str();
  cmd->add_option("--height", a.height, "Synthetic image height")->capture_default_str();
  cmd->add_option("--k0", a.k0, "Layer-1 seed")->capture_default_str();
  cmd->add_option("--k", a.k, "Layer-2 seed used for queries")->capture_default_str();
  cmd->add_option("--k-prime", a.k_prime, "Layer-2 seed used for re-encryption")->capture_default_str();
  cmd->add_option("--n", a.n, "N (default floor(M/10))");
  cmd->add_option("--jobs", a.jobs, "Worker threads")->capture_default_str();
}

struct DatasetArgs {
  CorpusArgs corpus;
  std::string out_dir;
  int condition = 2;
};

int cmd_dataset(const DatasetArgs& a, std::ostream& out) {
  const auto images = a.corpus.load();
  const auto ds = bench::build_dataset(images, bench::ConditionGrid::standard(a.condition), a.corpus.seeds(),
                                       a.corpus.n, a.corpus.jobs);
  const auto features = bench::extract_features(ds, a.corpus.jobs);
  const auto records = bench::write_dataset(ds, features, a.out_dir);
  out << (fs::path(a.out_dir) / "manifest.jsonl").string() << " records=" << records.size() << "\n";
  return kOk;
}

std::vector<int> parse_conditions(const std::string& s) {
  if (s == "all") return {1, 2, 3};
  if (s == "1" || s == "2" || s == "3") return {std::stoi(s)};
  throw UsageError("--condition must be 1, 2, 3 or all");
}

std::vector<bench::KeyMode> parse_modes(const std::string& s) {
  if (s == "both") return {bench::KeyMode::kSameKey, bench::KeyMode::kRekeyed};
  if (s == "same") return {bench::KeyMode::kSameKey};
  if (s == "rekeyed") return {bench::KeyMode::kRekeyed};
  throw UsageError("--mode must be same, rekeyed or both");
}

struct BenchArgs {
  CorpusArgs corpus;
  std::string condition = "all";
  std::string mode = "both";
  int d = 150;
  std::vector<std::size_t> sweep;
  std::string report, json;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  bench::BenchConfig cfg;
  cfg.conditions = parse_conditions(a.condition);
  cfg.modes = parse_modes(a.mode);
  if (a.corpus.count == 0) throw UsageError("--count must be positive");
  cfg.count = a.corpus.count;
  cfg.seeds = a.corpus.seeds();
  cfg.threshold = a.d;
  cfg.n_fixed = a.corpus.n;
  if (!a.corpus.corpus.empty()) cfg.corpus = a.corpus.corpus;
  cfg.corpus_seed = a.corpus.corpus_seed;
  cfg.width = a.corpus.width;
  cfg.height = a.corpus.height;
  cfg.sweep = a.sweep;
  cfg.jobs = a.corpus.jobs;
  const auto report = bench::run_bench(cfg);
  const auto text = bench::render_text(report);
  out << text;
  if (!a.report.empty()) write_file(a.report, as_bytes(text));
  if (!a.json.empty()) write_file(a.json, as_bytes(bench::render_json(report)));
  return kOk;
}

struct CalibrateArgs {
  CorpusArgs corpus;
  int condition = 2;
  std::string mode = "rekeyed";
  int d_max = 400;
  int step = 1;
  std::string report;
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  const auto modes = parse_modes(a.mode);
  if (modes.size() != 1) throw UsageError("--mode must be same or rekeyed");
  const auto images = a.corpus.load();
  const auto ds = bench::build_dataset(images, bench::ConditionGrid::standard(a.condition), a.corpus.seeds(),
                                       a.corpus.n, a.corpus.jobs);
  const auto features = bench::extract_features(ds, a.corpus.jobs);
  const std::size_t n = a.corpus.n.value_or(bench::min_encryption_n(features));
  const auto cal = bench::calibrate(features, n, modes.front(), a.d_max, a.step);
  std::ostringstream table;
  table << "d p[%] r[%] tp fp fn\n";
  for (const auto& row : cal.rows) {
    const auto& s = row.evaluation.pairwise;
    table << row.threshold << " " << bench::format_percent(s.precision()) << " "
          << bench::format_percent(s.recall()) << " " << s.tp << " " << s.fp << " " << s.fn << "\n";
  }
  if (!a.report.empty()) write_file(a.report, as_bytes(table.str()));
  if (cal.smallest_perfect) {
    out << "smallest d with p = r = 100%: " << *cal.smallest_perfect << " (N=" << n << ")\n";
  } else {
    out << "no d <= " << a.d_max << " reaches p = r = 100% (N=" << n << ")\n";
  }
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return kIoError;
    case ErrorKind::kFormat:
      return kFormatError;
    case ErrorKind::kDimension:
      return kDimensionError;
    case ErrorKind::kKey:
      return kKeyError;
    case ErrorKind::kInvalidArgument:
      return kInvalidArgument;
  }
  return kInternalError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Identification of encryption-then-compression JPEG images", "etcident"};
  app.require_subcommand(1);

  EncryptArgs enc;
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt an image and write a JPEG plus a key file");
  encrypt->add_option("input", enc.in, "Input JPEG or PPM/PGM")->required();
  encrypt->add_option("output", enc.out, "Output JPEG")->required();
  encrypt->add_option("--k0", enc.k0, "Layer-1 seed (unsigned 64-bit)");
  encrypt->add_option("--k", enc.k, "Layer-2 seed (unsigned 64-bit)");
  encrypt->add_option("--n", enc.n, "Number of fixed leading blocks N (default floor(M/10))");
  encrypt->add_option("--qf", enc.qf, "JPEG quality factor")->capture_default_str();
  encrypt->add_flag("--crop", enc.crop, "Crop to a multiple of 8 instead of failing");
  encrypt->add_option("--key-out", enc.key_out, "Key file path (default <output>.key)");

  DecryptArgs dec;
  auto* decrypt = app.add_subcommand("decrypt", "Decrypt an encrypted JPEG");
  decrypt->add_option("input", dec.in, "Encrypted JPEG")->required();
  decrypt->add_option("output", dec.out, "Output image (.ppm/.pgm, otherwise JPEG)")->required();
  decrypt->add_option("--key", dec.key, "Key file written by encrypt");
  decrypt->add_option("--qf", dec.qf, "Quality factor when writing JPEG")->capture_default_str();

  ExtractArgs ext;
  auto* extract = app.add_subcommand("extract", "Write the |DC| feature of an encrypted JPEG");
  extract->add_option("input", ext.in, "Encrypted JPEG")->required();
  extract->add_option("output", ext.out, "ETCF feature file")->required();
  extract->add_option("--n", ext.n, "Feature length N (default floor(M/10))");
  extract->add_option("--text", ext.text, "Also write one value per line to this path");

  IdentifyArgs idn;
  auto* identify = app.add_subcommand("identify", "Match a query feature against a manifest");
  identify->add_option("query", idn.query, "Query ETCF feature file")->required();
  identify->add_option("manifest", idn.manifest, "Database manifest (JSON lines)")->required();
  identify->add_option("--d", idn.d, "Acceptance threshold d")->capture_default_str();
  identify->add_option("--n", idn.n, "Feature length N (default: query length)");

  DatasetArgs dsa;
  auto* dataset = app.add_subcommand("dataset", "Generate encrypted images, features and a manifest");
  dataset->add_option("output_dir", dsa.out_dir, "Output directory")->required();
  dataset->add_option("--condition", dsa.condition, "Condition 1, 2 or 3")->capture_default_str();
  add_corpus_options(dataset, dsa.corpus);

  BenchArgs bn;
  auto* bench_cmd = app.add_subcommand("bench", "Run the precision/recall experiment");
  bench_cmd->add_option("--condition", bn.condition, "1, 2, 3 or all")->capture_default_str();
  bench_cmd->add_option("--mode", bn.mode, "same, rekeyed or both")->capture_default_str();
  bench_cmd->add_option("--d", bn.d, "Acceptance threshold d")->capture_default_str();
  bench_cmd->add_option("--sweep", bn.sweep, "Additional N values to evaluate")->delimiter(',');
  bench_cmd->add_option("--report", bn.report, "Write the text report here");
  bench_cmd->add_option("--json", bn.json, "Write the machine-readable report here");
  add_corpus_options(bench_cmd, bn.corpus);

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Find the smallest d with p = r = 100%");
  calibrate->add_option("--condition", cal.condition, "Condition 1, 2 or 3")->capture_default_str();
  calibrate->add_option("--mode", cal.mode, "same or rekeyed")->capture_default_str();
  calibrate->add_option("--d-max", cal.d_max, "Largest d evaluated")->capture_default_str();
  calibrate->add_option("--step", cal.step, "Step between evaluated d values")->capture_default_str();
  calibrate->add_option("--report", cal.report, "Write the full d table here");
  add_corpus_options(calibrate, cal.corpus);

  std::vector<const char*> argv{"etcident"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "etcident: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  }

  try {
    if (encrypt->parsed()) return cmd_encrypt(enc, out);
    if (decrypt->parsed()) return cmd_decrypt(dec, out);
    if (extract->parsed()) return cmd_extract(ext, out);
    if (identify->parsed()) return cmd_identify(idn, out);
    if (dataset->parsed()) return cmd_dataset(dsa, out);
    if (bench_cmd->parsed()) return cmd_bench(bn, out);
    if (calibrate->parsed()) return cmd_calibrate(cal, out);
  } catch (const UsageError& e) {
    err << "etcident: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "etcident: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "etcident: internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsage;
}

}  // namespace etcid::cli
