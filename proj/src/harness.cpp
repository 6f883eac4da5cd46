#include "artforge/harness.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "artforge/error.hpp"
#include "artforge/rng.hpp"

namespace artforge {

void TrainConfig::validate() const {
  if (!(base_lr > 0.0)) throw ValidationError("base_lr must be positive");
  if (!(lr_gamma > 0.0 && lr_gamma < 1.0)) throw ValidationError("lr_gamma must lie in (0, 1)");
  if (warmup_iters < 0) throw ValidationError("warmup_iters must be >= 0");
  if (!(warmup_start_factor > 0.0 && warmup_start_factor <= 1.0))
    throw ValidationError("warmup_start_factor must lie in (0, 1]");
  if (patience < 1) throw ValidationError("patience must be >= 1");
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (lr_step_epochs < 1) throw ValidationError("lr_step_epochs must be >= 1");
  if (!(momentum >= 0.0)) throw ValidationError("momentum must be >= 0");
  if (!(weight_decay >= 0.0)) throw ValidationError("weight_decay must be >= 0");
  if (!(min_delta >= 0.0)) throw ValidationError("min_delta must be >= 0");
  if (trainable_backbone_layers < 0 || trainable_backbone_layers > 5)
    throw ValidationError("trainable_backbone_layers must lie in [0, 5]");
  if (val_subset_size == 0) throw ValidationError("val_subset_size must be positive");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (early_stop_metric != "ap50" && early_stop_metric != "ap")
    throw ValidationError("early_stop_metric must be 'ap50' or 'ap'");
}

double lr_at(const TrainConfig& cfg, std::int64_t global_iter, std::int64_t iters_per_epoch) {
  if (iters_per_epoch <= 0) throw ValidationError("iters_per_epoch must be positive");
  if (global_iter < 0) throw ValidationError("global_iter must be >= 0");
  const std::int64_t epoch = global_iter / iters_per_epoch;
  const double decay = std::pow(cfg.lr_gamma, static_cast<double>(epoch / cfg.lr_step_epochs));
  double warmup = 1.0;
  if (global_iter < cfg.warmup_iters) {
    if (cfg.warmup_shape == WarmupShape::constant) {
      warmup = cfg.warmup_start_factor;
    } else {
      const double progress = static_cast<double>(global_iter) / static_cast<double>(cfg.warmup_iters);
      warmup = cfg.warmup_start_factor + (1.0 - cfg.warmup_start_factor) * progress;
    }
  }
  return cfg.base_lr * decay * warmup;
}

std::pair<EarlyStopState, bool> early_stop_update(EarlyStopState state, double metric, int patience) {
  if (std::isnan(metric)) throw ValidationError("early stopping metric is NaN");
  if (patience < 1) throw ValidationError("patience must be >= 1");
  if (metric > state.best_metric + state.min_delta) {
    state.best_metric = metric;
    state.evals_since_improvement = 0;
  } else {
    ++state.evals_since_improvement;
  }
  state.stopped = state.evals_since_improvement >= patience;
  return {state, state.stopped};
}

std::optional<std::size_t> early_stop_at(const std::vector<double>& series, int patience, double min_delta) {
  EarlyStopState state;
  state.min_delta = min_delta;
  for (std::size_t i = 0; i < series.size(); ++i) {
    bool stop = false;
    std::tie(state, stop) = early_stop_update(state, series[i], patience);
    if (stop) return i + 1;
  }
  return std::nullopt;
}

std::vector<std::size_t> ntrain_sizes(std::size_t total_available) {
  constexpr std::size_t kStart = 1000;
  if (total_available < kStart) throw ValidationError("at least 1000 training images are required");
  std::vector<std::size_t> sizes;
  for (std::size_t n = kStart; n <= total_available; n *= 2) sizes.push_back(n);
  if (sizes.back() < total_available) sizes.push_back(total_available);
  return sizes;
}

SweepSpec make_sweep(std::size_t total_available, std::uint64_t seed) {
  SweepSpec spec;
  spec.sizes = ntrain_sizes(total_available);
  for (std::size_t n : spec.sizes) spec.seeds.push_back(derive_seed(seed, n));
  return spec;
}

BaselineTable people_art_baselines() {
  return {
      {"Cai et al. 2015", "VOC AP.50", 0.40},
      {"Westlake et al. 2016", "VOC AP.50", 0.58},
      {"Redmon et al. 2016", "VOC AP.50", 0.45},
      {"Gonthier et al. 2020", "VOC AP.50", 0.58},
  };
}

ComparisonTable comparison_table(const std::vector<LabelledReport>& ours, const BaselineTable& baselines) {
  ComparisonTable table;
  for (const auto& b : baselines) {
    if (!(b.ap50 >= 0.0 && b.ap50 <= 1.0)) throw ValidationError("baseline AP.50 outside [0, 1]: " + b.source);
    table.rows.push_back({b.source, b.metric, std::nullopt, b.ap50, std::nullopt, false});
    const std::size_t i = table.rows.size() - 1;
    if (!table.best_baseline || b.ap50 > *table.rows[*table.best_baseline].ap50) table.best_baseline = i;
  }
  for (const auto& o : ours) {
    table.rows.push_back({o.label, "COCO AP.50", o.report.ap, o.report.ap50, o.report.ap75, true});
    const std::size_t i = table.rows.size() - 1;
    if (o.report.ap50 && (!table.best_ours || *o.report.ap50 > *table.rows[*table.best_ours].ap50))
      table.best_ours = i;
  }
  if (table.best_ours && table.best_baseline)
    table.delta = *table.rows[*table.best_ours].ap50 - *table.rows[*table.best_baseline].ap50;
  return table;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : "---"; }
std::string csv_cell(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : ""; }

}  // namespace

std::string ComparisonTable::render_text() const {
  std::size_t w = 6;
  for (const auto& r : rows) w = std::max(w, r.source.size());
  std::string out = fmt::format("{:<{}}  {:<10}  {:>5}  {:>5}  {:>5}\n", "Source", w, "Metric", "AP", "AP.50", "AP.75");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += fmt::format("{:<{}}  {:<10}  {:>5}  {:>5}  {:>5}{}\n", r.source, w, r.metric, cell(r.ap), cell(r.ap50),
                       cell(r.ap75), best_ours == i ? "  *" : "");
  }
  if (delta) {
    out += fmt::format("delta AP.50 (best ours - best baseline) = {:+.2f}\n", *delta);
  }
  return out;
}

std::string ComparisonTable::render_csv() const {
  std::string out = "source,metric,ap,ap50,ap75,ours\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{}\n", r.source, r.metric, csv_cell(r.ap), csv_cell(r.ap50), csv_cell(r.ap75),
                       r.ours ? 1 : 0);
  return out;
}

namespace {

constexpr std::string_view kConfigHeader = "# artforge train config v1";

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ValidationError("bad value for '" + key + "': '" + value + "'");
  return v;
}

}  // namespace

std::string emit_train_config(const TrainConfig& cfg, const TrainPaths& paths) {
  cfg.validate();
  for (const auto* p : {&paths.train_annotations, &paths.train_images, &paths.val_annotations, &paths.val_images})
    if (p->find('\n') != std::string::npos) throw ValidationError("paths must not contain newlines");
  std::string out(kConfigHeader);
  out += '\n';
  auto put = [&out](std::string_view key, const auto& value) { out += fmt::format("{}={}\n", key, value); };
  put("base_lr", cfg.base_lr);
  put("momentum", cfg.momentum);
  put("weight_decay", cfg.weight_decay);
  put("epochs", cfg.epochs);
  put("lr_step_epochs", cfg.lr_step_epochs);
  put("lr_gamma", cfg.lr_gamma);
  put("warmup_iters", cfg.warmup_iters);
  put("warmup_start_factor", cfg.warmup_start_factor);
  put("warmup_shape", cfg.warmup_shape == WarmupShape::linear ? "linear" : "constant");
  put("trainable_backbone_layers", cfg.trainable_backbone_layers);
  put("val_subset_size", cfg.val_subset_size);
  put("patience", cfg.patience);
  put("min_delta", cfg.min_delta);
  put("early_stop_metric", cfg.early_stop_metric);
  put("batch_size", cfg.batch_size);
  put("train_annotations", paths.train_annotations);
  put("train_images", paths.train_images);
  put("val_annotations", paths.val_annotations);
  put("val_images", paths.val_images);
  return out;
}

std::pair<TrainConfig, TrainPaths> parse_train_config(std::string_view text) {
  TrainConfig cfg;
  TrainPaths paths;
  std::set<std::string> seen;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    offset = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError("expected key=value, got '" + std::string(line) + "'");
    const std::string key(line.substr(0, eq));
    const std::string value(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ValidationError("duplicate key '" + key + "'");

    if (key == "base_lr") cfg.base_lr = parse_number<double>(key, value);
    else if (key == "momentum") cfg.momentum = parse_number<double>(key, value);
    else if (key == "weight_decay") cfg.weight_decay = parse_number<double>(key, value);
    else if (key == "epochs") cfg.epochs = parse_number<int>(key, value);
    else if (key == "lr_step_epochs") cfg.lr_step_epochs = parse_number<int>(key, value);
    else if (key == "lr_gamma") cfg.lr_gamma = parse_number<double>(key, value);
    else if (key == "warmup_iters") cfg.warmup_iters = parse_number<std::int64_t>(key, value);
    else if (key == "warmup_start_factor") cfg.warmup_start_factor = parse_number<double>(key, value);
    else if (key == "warmup_shape") {
      if (value == "linear") cfg.warmup_shape = WarmupShape::linear;
      else if (value == "constant") cfg.warmup_shape = WarmupShape::constant;
      else throw ValidationError("bad warmup_shape '" + value + "'");
    }
    else if (key == "trainable_backbone_layers") cfg.trainable_backbone_layers = parse_number<int>(key, value);
    else if (key == "val_subset_size") cfg.val_subset_size = parse_number<std::size_t>(key, value);
    else if (key == "patience") cfg.patience = parse_number<int>(key, value);
    else if (key == "min_delta") cfg.min_delta = parse_number<double>(key, value);
    else if (key == "early_stop_metric") cfg.early_stop_metric = value;
    else if (key == "batch_size") cfg.batch_size = parse_number<int>(key, value);
    else if (key == "train_annotations") paths.train_annotations = value;
    else if (key == "train_images") paths.train_images = value;
    else if (key == "val_annotations") paths.val_annotations = value;
    else if (key == "val_images") paths.val_images = value;
    else throw ValidationError("unknown key '" + key + "'");
  }
  cfg.validate();
  return {cfg, paths};
}

namespace {

constexpr std::string_view kLogHeader = "# artforge metrics log v1";
constexpr std::string_view kLogColumns = "iteration\tepoch\tlr\tval_ap50\tval_ap";

std::string opt_cell(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : "-"; }

}  // namespace

std::string write_metrics_log(const MetricsLog& log) {
  if (log.iters_per_epoch <= 0) throw ValidationError("iters_per_epoch must be positive");
  std::string out = fmt::format("{}\n# iters_per_epoch={}\n{}\n", kLogHeader, log.iters_per_epoch, kLogColumns);
  for (const auto& r : log.rows)
    out += fmt::format("{}\t{}\t{}\t{}\t{}\n", r.iteration, r.epoch, r.lr, opt_cell(r.val_ap50), opt_cell(r.val_ap));
  return out;
}

MetricsLog parse_metrics_log(std::string_view text) {
  MetricsLog log;
  std::size_t offset = 0, line_no = 0;
  bool saw_columns = false;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    const std::size_t line_offset = offset;
    offset = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kLogHeader) throw ParseError("not a metrics log", 0);
      continue;
    }
    if (line.empty()) continue;
    if (!saw_columns) {
      if (line.starts_with("# iters_per_epoch=")) {
        log.iters_per_epoch = parse_number<std::int64_t>("iters_per_epoch", std::string(line.substr(18)));
        continue;
      }
      if (line != kLogColumns) throw ParseError("expected metrics log column line", line_offset);
      saw_columns = true;
      continue;
    }
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      cols.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 5) throw ParseError(fmt::format("metrics log line {} must have 5 columns", line_no), line_offset);
    MetricsRow r;
    r.iteration = parse_number<std::int64_t>("iteration", cols[0]);
    r.epoch = parse_number<std::int64_t>("epoch", cols[1]);
    r.lr = parse_number<double>("lr", cols[2]);
    if (cols[3] != "-") r.val_ap50 = parse_number<double>("val_ap50", cols[3]);
    if (cols[4] != "-") r.val_ap = parse_number<double>("val_ap", cols[4]);
    log.rows.push_back(r);
  }
  if (!saw_columns) throw ParseError("truncated metrics log", text.size());
  if (log.iters_per_epoch <= 0) throw SchemaError("metrics_log.iters_per_epoch", "missing or not positive");
  return log;
}

std::vector<ScheduleMismatch> check_schedule(const TrainConfig& cfg, const MetricsLog& log, double tolerance) {
  std::vector<ScheduleMismatch> bad;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const auto& r = log.rows[i];
    const double want = lr_at(cfg, r.iteration, log.iters_per_epoch);
    if (std::abs(want - r.lr) > tolerance || r.epoch != r.iteration / log.iters_per_epoch)
      bad.push_back({i, want, r.lr});
  }
  return bad;
}

std::vector<double> validation_series(const TrainConfig& cfg, const MetricsLog& log) {
  std::vector<double> series;
  for (const auto& r : log.rows) {
    const auto& v = cfg.early_stop_metric == "ap" ? r.val_ap : r.val_ap50;
    if (v) series.push_back(*v);
  }
  return series;
}

}  // namespace artforge
