#include "artforge/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "artforge/annotations.hpp"
#include "artforge/coco_io.hpp"
#include "artforge/digest.hpp"
#include "artforge/error.hpp"
#include "artforge/eval.hpp"
#include "artforge/forge.hpp"
#include "artforge/harness.hpp"
#include "artforge/peopleart.hpp"
#include "artforge/report.hpp"
#include "artforge/rng.hpp"

namespace artforge {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Routes library logging to `err` for the duration of one run.
class LogScope {
 public:
  LogScope(std::ostream& err, const std::string& level) : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("artforge", sink);
    logger->set_pattern("[%l] %v");
    const auto lvl = spdlog::level::from_str(level);
    if (lvl == spdlog::level::off && level != "off") throw UsageError("unknown log level '" + level + "'");
    logger->set_level(lvl);
    spdlog::set_default_logger(std::move(logger));
  }
  ~LogScope() { spdlog::set_default_logger(previous_); }
  LogScope(const LogScope&) = delete;
  LogScope& operator=(const LogScope&) = delete;

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::string log_level = "info";
};

/// Provenance written next to every output.
class RunRecord {
 public:
  RunRecord(std::string subcommand, const std::vector<std::string>& args, const Globals& g)
      : doc_({{"tool", "artforge"},
              {"version", kVersion},
              {"subcommand", std::move(subcommand)},
              {"argv", args},
              {"rng", std::string(kRngName)},
              {"workers", g.workers},
              {"inputs", Json::array()},
              {"outputs", Json::array()}}) {
    doc_["seed"] = g.seed ? Json(*g.seed) : Json(nullptr);
  }

  void input(const fs::path& path) {
    doc_["inputs"].push_back({{"path", path.generic_string()}, {"sha256", sha256_file(path)}});
  }
  void input_digest(const std::string& what, const std::string& digest) {
    doc_["inputs"].push_back({{"path", what}, {"sha256", digest}});
  }
  void output(const fs::path& path) { doc_["outputs"].push_back(path.generic_string()); }

  void write(const fs::path& path) const {
    Json doc = doc_;
    const auto now = std::chrono::system_clock::now();
    doc["created_at_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    write_text_file(path, doc.dump(2) + "\n");
  }

 private:
  Json doc_;
};

fs::path sidecar(const fs::path& file) { return fs::path(file.string() + ".run.json"); }

fs::path default_out(const std::string& fallback) {
  if (const char* env = std::getenv("ARTFORGE_OUTPUT_DIR"); env != nullptr && *env != '\0') return fs::path(env) / fallback;
  return fs::path(fallback);
}

std::uint64_t require_seed(const Globals& g, const char* subcommand) {
  if (!g.seed) throw UsageError(fmt::format("{} is stochastic and requires --seed", subcommand));
  return *g.seed;
}

void print_stats(std::ostream& out, const std::string& label, const DatasetStats& s) {
  fmt::print(out, "{}: images={} positive={} people={} (crowd={})\n", label, s.n_images, s.n_positive, s.n_people,
             s.n_people_crowd);
}

// ---- subcommands -----------------------------------------------------------

struct IngestOpts {
  std::string coco;
  std::string out;
  std::int64_t person = kCocoPersonCategory;
  bool include_crowd_only = false;
};

int cmd_ingest(const IngestOpts& o, const Globals& g, const std::vector<std::string>& args, std::ostream& out) {
  ParseStats ps;
  const DatasetIndex ds = load_dataset(o.coco, &ps);
  fmt::print(out, "images={} annotations={} categories={} dropped_degenerate={}\n", ds.n_images(),
             ds.annotations().size(), ds.categories().size(), ps.dropped_degenerate);
  if (ds.has_category(o.person)) print_stats(out, "person", dataset_stats(ds, {o.person, o.include_crowd_only}));
  if (!o.out.empty()) {
    RunRecord rec("ingest", args, g);
    rec.input(o.coco);
    write_text_file(o.out, write_dataset(ds));
    rec.output(o.out);
    rec.write(sidecar(o.out));
  }
  return kExitOk;
}

int cmd_filter(const IngestOpts& o, const Globals& g, const std::vector<std::string>& args, std::ostream& out) {
  const DatasetIndex ds = load_dataset(o.coco);
  const PositivityRule rule{o.person, o.include_crowd_only};
  const DatasetIndex filtered = filter_person_positive(ds, rule);
  const PositivityRule other{o.person, !o.include_crowd_only};
  print_stats(out, o.include_crowd_only ? "crowd-inclusive (selected)" : "non-crowd (selected)",
              dataset_stats(filtered, rule));
  print_stats(out, o.include_crowd_only ? "non-crowd" : "crowd-inclusive",
              dataset_stats(filter_person_positive(ds, other), other));
  RunRecord rec("filter", args, g);
  rec.input(o.coco);
  write_text_file(o.out, write_dataset(filtered));
  rec.output(o.out);
  rec.write(sidecar(o.out));
  return kExitOk;
}

struct SampleOpts {
  std::string coco;
  std::string out;
  std::size_t n = 0;
};

int cmd_sample(const SampleOpts& o, const Globals& g, const std::vector<std::string>& args, std::ostream& out) {
  const std::uint64_t seed = require_seed(g, "sample");
  const DatasetIndex ds = load_dataset(o.coco);
  const DatasetIndex picked = subset_sample(ds, o.n, seed);
  RunRecord rec("sample", args, g);
  rec.input(o.coco);
  write_text_file(o.out, write_dataset(picked));
  rec.output(o.out);
  rec.write(sidecar(o.out));
  fmt::print(out, "sampled {} of {} images ({} annotations)\n", picked.n_images(), ds.n_images(),
             picked.annotations().size());
  return kExitOk;
}

struct ForgeOpts {
  std::string coco;
  std::string images;
  std::string styles;
  std::string out;
  double alpha = 1.0;
  double eps = kDefaultEps;
  std::string codec = "gaussian_pyramid:3";
  std::string format = "jpg";
  int quality = 95;
  double failure_budget = 0.01;
};

int cmd_forge(const ForgeOpts& o, const Globals& g, const std::vector<std::string>& args, std::ostream& out) {
  ForgeConfig cfg;
  cfg.global_seed = require_seed(g, "forge");
  cfg.alpha = o.alpha;
  cfg.eps = o.eps;
  cfg.codec = FeatureCodec::parse(o.codec);
  cfg.format = parse_image_format(o.format);
  cfg.jpeg_quality = o.quality;
  cfg.failure_budget = o.failure_budget;
  cfg.workers = g.workers;
  cfg.content_root = o.images;
  cfg.validate();
  if (!fs::is_directory(o.images)) throw IoError("content image directory not found: " + o.images);

  const DatasetIndex ds = load_dataset(o.coco);
  const StyleLibrary lib = StyleLibrary::from_directory(o.styles);
  const ForgeManifest manifest = assign_styles(ds, lib, cfg.global_seed, cfg);

  const fs::path root(o.out);
  cfg.output_dir = root / "images";
  const ForgeResult result = forge(ds, lib, manifest, cfg);

  RunRecord rec("forge", args, g);
  rec.input(o.coco);
  std::string style_ids;
  for (const auto& s : lib.styles()) style_ids += s.id + "\n";
  rec.input_digest("styles:" + o.styles, sha256_hex(style_ids));
  write_text_file(root / "annotations.json", write_dataset(result.dataset));
  write_text_file(root / "manifest.tsv", write_manifest(manifest));
  rec.output(root / "annotations.json");
  rec.output(root / "manifest.tsv");
  rec.output(cfg.output_dir);
  rec.write(root / "run.json");
  fmt::print(out, "forged {} of {} images with {} styles (alpha={}, codec={}), {} failure(s)\n",
             result.dataset.n_images(), ds.n_images(), lib.size(), cfg.alpha, cfg.codec.descriptor(),
             result.failures.size());
  return kExitOk;
}

struct VerifyOpts {
  std::string original;
  std::string forged;
  std::string manifest;
  std::string images;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out) {
  const DatasetIndex original = load_dataset(o.original);
  const DatasetIndex forged = load_dataset(o.forged);
  const ForgeManifest manifest = parse_manifest(read_text_file(o.manifest));
  std::optional<fs::path> images;
  if (!o.images.empty()) images = o.images;
  const VerificationReport report = verify_forge(original, forged, manifest, images);
  for (const auto& v : report.violations) fmt::print(out, "{}: {}\n", to_string(v.kind), v.message);
  fmt::print(out, "{} violation(s)\n", report.violations.size());
  return report.ok() ? kExitOk : kExitFailure;
}

struct EvaluateOpts {
  std::string gt;
  std::string dets;
  std::string out;
  std::int64_t category = kCocoPersonCategory;
  std::size_t max_dets = 100;
  bool svg = false;
};

int cmd_evaluate(const EvaluateOpts& o, const Globals& g, const std::vector<std::string>& args, std::ostream& out) {
  const DatasetIndex gt = load_dataset(o.gt);
  const std::vector<Detection> dets = load_detections(o.dets);
  EvalConfig cfg;
  cfg.category = o.category;
  cfg.max_dets_per_image = o.max_dets;
  cfg.workers = g.workers;
  const ApReport report = evaluate(gt, dets, cfg);
  fmt::print(out, "{}\n", summary_line(report));
  const fs::path dir = o.out.empty() ? default_out("evaluation") : fs::path(o.out);
  RunRecord rec("evaluate", args, g);
  rec.input(o.gt);
  rec.input(o.dets);
  const ExportedReport files = export_report(report, dir, o.svg);
  rec.output(files.csv);
  rec.output(files.summary);
  if (!files.svg.empty()) rec.output(files.svg);
  rec.write(dir / "run.json");
  if (!report.defined()) {
    spdlog::error("no ground truth for category {}: AP undefined", o.category);
    return kExitFailure;
  }
  return kExitOk;
}

struct SweepOpts {
  std::size_t total = 0;
  std::string coco;
  std::string images;
  std::string val_coco;
  std::string val_images;
  std::string out;
  int lr_step_epochs = 5;
};

int cmd_sweep(const SweepOpts& o, const Globals& g, const std::vector<std::string>& args, std::ostream& out) {
  const bool materialize = !o.coco.empty();
  const std::uint64_t seed = materialize ? require_seed(g, "sweep --coco") : g.seed.value_or(0);
  TrainConfig tc;
  tc.lr_step_epochs = o.lr_step_epochs;
  tc.validate();

  std::optional<DatasetIndex> ds;
  std::size_t total = o.total;
  if (materialize) {
    ds = load_dataset(o.coco);
    if (total == 0) total = ds->n_images();
    if (total > ds->n_images())
      throw ValidationError(fmt::format("--total {} exceeds the {} images available", total, ds->n_images()));
  }
  if (total == 0) throw UsageError("sweep needs --total or --coco");
  const SweepSpec spec = make_sweep(total, seed);
  fmt::print(out, "{} models\n", spec.sizes.size());
  for (std::size_t i = 0; i < spec.sizes.size(); ++i) fmt::print(out, "{}\tseed={}\n", spec.sizes[i], spec.seeds[i]);
  if (!materialize) return kExitOk;

  const fs::path dir = o.out.empty() ? default_out("sweep") : fs::path(o.out);
  RunRecord rec("sweep", args, g);
  rec.input(o.coco);
  for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
    const std::size_t n = spec.sizes[i];
    const fs::path subset = dir / fmt::format("train_{}.json", n);
    const fs::path config = dir / fmt::format("train_{}.cfg", n);
    write_text_file(subset, write_dataset(subset_sample(*ds, n, spec.seeds[i])));
    write_text_file(config, emit_train_config(tc, {fs::absolute(subset).generic_string(), o.images, o.val_coco,
                                                   o.val_images}));
    rec.output(subset);
    rec.output(config);
  }
  rec.write(dir / "run.json");
  return kExitOk;
}

struct ReportOpts {
  std::string gt;
  std::vector<std::string> runs;
  std::vector<std::string> injected;
  std::string out;
  std::int64_t category = kCocoPersonCategory;
};

std::pair<std::string, std::string> split_label(const std::string& spec, const char* flag) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
    throw UsageError(fmt::format("{} expects LABEL=VALUE, got '{}'", flag, spec));
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

int cmd_report(const ReportOpts& o, const Globals& g, const std::vector<std::string>& args, std::ostream& out) {
  if (!o.runs.empty() && o.gt.empty()) throw UsageError("--run requires --gt");
  std::vector<LabelledReport> ours;
  RunRecord rec("report", args, g);
  std::optional<DatasetIndex> gt;
  if (!o.gt.empty()) {
    gt = load_dataset(o.gt);
    rec.input(o.gt);
  }
  EvalConfig cfg;
  cfg.category = o.category;
  cfg.workers = g.workers;
  for (const auto& spec : o.runs) {
    auto [label, path] = split_label(spec, "--run");
    ours.push_back({label, evaluate(*gt, load_detections(path), cfg)});
    rec.input(path);
  }
  for (const auto& spec : o.injected) {
    auto [label, values] = split_label(spec, "--inject");
    double v[3];
    std::size_t start = 0;
    for (int k = 0; k < 3; ++k) {
      const auto comma = values.find(',', start);
      if ((k < 2) == (comma == std::string::npos)) throw UsageError("--inject expects LABEL=ap,ap50,ap75");
      const std::string part = values.substr(start, k < 2 ? comma - start : std::string::npos);
      try {
        std::size_t used = 0;
        v[k] = std::stod(part, &used);
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::logic_error&) {
        throw UsageError("bad number in --inject: '" + part + "'");
      }
      if (!(v[k] >= 0.0 && v[k] <= 1.0)) throw ValidationError("--inject values must lie in [0, 1]");
      start = comma + 1;
    }
    ours.push_back({label, summary_report(v[0], v[1], v[2])});
  }
  const ComparisonTable table = comparison_table(ours, people_art_baselines());
  out << table.render_text();

  const fs::path dir = o.out.empty() ? default_out("report") : fs::path(o.out);
  write_text_file(dir / "comparison.txt", table.render_text());
  write_text_file(dir / "comparison.csv", table.render_csv());
  rec.output(dir / "comparison.txt");
  rec.output(dir / "comparison.csv");
  for (const auto& r : ours) {
    if (r.report.per_threshold.empty()) continue;
    const auto files = export_report(r.report, dir / r.label, false);
    rec.output(files.csv);
    rec.output(files.summary);
  }
  rec.write(dir / "run.json");
  return kExitOk;
}

struct CheckLogOpts {
  std::string config;
  std::string log;
  double tolerance = 1e-9;
};

int cmd_check_log(const CheckLogOpts& o, std::ostream& out) {
  const auto [cfg, paths] = parse_train_config(read_text_file(o.config));
  const MetricsLog log = parse_metrics_log(read_text_file(o.log));
  const auto bad = check_schedule(cfg, log, o.tolerance);
  for (const auto& m : bad)
    fmt::print(out, "row {}: iteration {} lr {} expected {}\n", m.row + 1, log.rows[m.row].iteration, m.logged,
               m.expected);
  const auto series = validation_series(cfg, log);
  const auto stop = early_stop_at(series, cfg.patience, cfg.min_delta);
  fmt::print(out, "{} rows, {} schedule mismatch(es), {} validation value(s) of {}", log.rows.size(), bad.size(),
             series.size(), cfg.early_stop_metric);
  if (stop) fmt::print(out, ", early stop at evaluation {}", *stop);
  fmt::print(out, "\n");
  return bad.empty() ? kExitOk : kExitFailure;
}

struct ConvertOpts {
  std::string root;
  std::string split = "test";
  std::string parser = "voc";
  std::string out;
  bool difficult_as_crowd = false;
};

int cmd_convert(const ConvertOpts& o, const Globals& g, const std::vector<std::string>& args, std::ostream& out) {
  VocParserOptions opts;
  opts.difficult_as_crowd = o.difficult_as_crowd;
  const auto parser = make_peopleart_parser(o.parser, opts);
  const DatasetIndex ds = parser->parse(o.root, o.split);
  print_stats(out, "people-art " + o.split, dataset_stats(ds));
  RunRecord rec("convert-peopleart", args, g);
  rec.input_digest("root:" + o.root, sha256_hex(o.parser + ":" + o.split));
  write_text_file(o.out, write_dataset(ds));
  rec.output(o.out);
  rec.write(sidecar(o.out));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Art-styled detection datasets: style transfer forging and COCO-protocol evaluation", "artforge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for stochastic subcommands");
  app.add_option("--workers", g.workers, "Worker threads for forge/evaluate")->check(CLI::PositiveNumber);
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|err|critical|off");

  IngestOpts ingest, filter;
  auto* c_ingest = app.add_subcommand("ingest", "Parse and validate a COCO annotation file");
  c_ingest->add_option("--coco", ingest.coco, "COCO instances file")->required()->check(CLI::ExistingFile);
  c_ingest->add_option("--out", ingest.out, "Write the normalized dataset here");
  c_ingest->add_option("--person-category", ingest.person);
  c_ingest->add_flag("--include-crowd-only", ingest.include_crowd_only);

  auto* c_filter = app.add_subcommand("filter", "Keep person-positive images and person annotations");
  c_filter->add_option("--coco", filter.coco)->required()->check(CLI::ExistingFile);
  c_filter->add_option("--out", filter.out)->required();
  c_filter->add_option("--person-category", filter.person);
  c_filter->add_flag("--include-crowd-only", filter.include_crowd_only,
                     "Count images whose only people are crowd regions as positive");

  SampleOpts sample;
  auto* c_sample = app.add_subcommand("sample", "Draw a seeded random image subset");
  c_sample->add_option("--coco", sample.coco)->required()->check(CLI::ExistingFile);
  c_sample->add_option("--n", sample.n)->required()->check(CLI::PositiveNumber);
  c_sample->add_option("--out", sample.out)->required();

  ForgeOpts forge_o;
  auto* c_forge = app.add_subcommand("forge", "Stylize a dataset, one style per image");
  c_forge->add_option("--coco", forge_o.coco)->required()->check(CLI::ExistingFile);
  c_forge->add_option("--images", forge_o.images, "Directory the file_name fields are relative to")->required();
  c_forge->add_option("--styles", forge_o.styles, "Directory of style images")->required()->check(CLI::ExistingDirectory);
  c_forge->add_option("--out", forge_o.out)->required();
  c_forge->add_option("--alpha", forge_o.alpha)->check(CLI::Range(0.0, 1.0));
  c_forge->add_option("--eps", forge_o.eps);
  c_forge->add_option("--codec", forge_o.codec, "identity | gaussian_pyramid:<levels>");
  c_forge->add_option("--format", forge_o.format, "jpg | png");
  c_forge->add_option("--quality", forge_o.quality, "JPEG quality")->check(CLI::Range(1, 100));
  c_forge->add_option("--failure-budget", forge_o.failure_budget)->check(CLI::Range(0.0, 1.0));

  VerifyOpts verify;
  auto* c_verify = app.add_subcommand("verify", "Check a forged dataset against its source");
  c_verify->add_option("--original", verify.original)->required()->check(CLI::ExistingFile);
  c_verify->add_option("--forged", verify.forged)->required()->check(CLI::ExistingFile);
  c_verify->add_option("--manifest", verify.manifest)->required()->check(CLI::ExistingFile);
  c_verify->add_option("--images", verify.images, "Forged image directory (checks files)");

  EvaluateOpts evaluate_o;
  auto* c_eval = app.add_subcommand("evaluate", "COCO-protocol AP of detections against ground truth");
  c_eval->add_option("--gt", evaluate_o.gt)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--dets", evaluate_o.dets)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--out", evaluate_o.out, "Output directory (default $ARTFORGE_OUTPUT_DIR/evaluation)");
  c_eval->add_option("--category", evaluate_o.category);
  c_eval->add_option("--max-dets", evaluate_o.max_dets)->check(CLI::PositiveNumber);
  c_eval->add_flag("--svg", evaluate_o.svg, "Also plot the 0.50 and 0.75 curves");

  SweepOpts sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Training-set size ladder; optionally materialize subsets and configs");
  c_sweep->add_option("--total", sweep.total, "Images available");
  c_sweep->add_option("--coco", sweep.coco, "Training annotations to subsample")->check(CLI::ExistingFile);
  c_sweep->add_option("--images", sweep.images, "Training image directory written into configs");
  c_sweep->add_option("--val-coco", sweep.val_coco);
  c_sweep->add_option("--val-images", sweep.val_images);
  c_sweep->add_option("--out", sweep.out);
  c_sweep->add_option("--lr-step-epochs", sweep.lr_step_epochs)->check(CLI::PositiveNumber);

  ReportOpts report;
  auto* c_report = app.add_subcommand("report", "Compare results against published People-Art baselines");
  c_report->add_option("--gt", report.gt)->check(CLI::ExistingFile);
  c_report->add_option("--run", report.runs, "LABEL=detections.json (repeatable)");
  c_report->add_option("--inject", report.injected, "LABEL=ap,ap50,ap75 known result (repeatable)");
  c_report->add_option("--out", report.out);
  c_report->add_option("--category", report.category);

  ConvertOpts convert;
  auto* c_convert = app.add_subcommand("convert-peopleart", "Convert People-Art annotations to COCO format");
  c_convert->add_option("--root", convert.root)->required()->check(CLI::ExistingDirectory);
  c_convert->add_option("--split", convert.split);
  c_convert->add_option("--parser", convert.parser, "Native layout parser (voc)");
  c_convert->add_option("--out", convert.out)->required();
  c_convert->add_flag("--difficult-as-crowd", convert.difficult_as_crowd);

  CheckLogOpts check_log;
  auto* c_check = app.add_subcommand("check-log", "Compare a training metrics log with the configured schedule");
  c_check->add_option("--config", check_log.config)->required()->check(CLI::ExistingFile);
  c_check->add_option("--log", check_log.log)->required()->check(CLI::ExistingFile);
  c_check->add_option("--tolerance", check_log.tolerance)->check(CLI::NonNegativeNumber);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv{"artforge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    LogScope logs(err, g.log_level);
    if (c_ingest->parsed()) return cmd_ingest(ingest, g, args, out);
    if (c_filter->parsed()) return cmd_filter(filter, g, args, out);
    if (c_sample->parsed()) return cmd_sample(sample, g, args, out);
    if (c_forge->parsed()) return cmd_forge(forge_o, g, args, out);
    if (c_verify->parsed()) return cmd_verify(verify, out);
    if (c_eval->parsed()) return cmd_evaluate(evaluate_o, g, args, out);
    if (c_sweep->parsed()) return cmd_sweep(sweep, g, args, out);
    if (c_report->parsed()) return cmd_report(report, g, args, out);
    if (c_convert->parsed()) return cmd_convert(convert, g, args, out);
    if (c_check->parsed()) return cmd_check_log(check_log, out);
  } catch (const UsageError& e) {
    fmt::print(err, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace artforge
