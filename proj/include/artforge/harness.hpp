#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "artforge/eval.hpp"

namespace artforge {

enum class WarmupShape { linear, constant };

/// Fine-tuning hyperparameters handed to the detector adapter.
struct TrainConfig {
  double base_lr = 0.005;
  double momentum = 0.9;
  double weight_decay = 0.0005;
  int epochs = 15;
  int lr_step_epochs = 5;
  double lr_gamma = 0.2;
  std::int64_t warmup_iters = 5000;
  double warmup_start_factor = 1e-3;
  WarmupShape warmup_shape = WarmupShape::linear;
  int trainable_backbone_layers = 2;
  std::size_t val_subset_size = 2000;
  int patience = 3;
  double min_delta = 0.0;
  /// Validation metric driving early stopping: "ap50" or "ap".
  std::string early_stop_metric = "ap50";
  /// Not stated by the source protocol; recorded so iters_per_epoch is auditable.
  int batch_size = 4;

  /// Throws ValidationError when an invariant does not hold.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Learning rate at a global iteration: step decay by lr_gamma every
/// lr_step_epochs epochs, times a warmup factor ramping to 1 at warmup_iters.
double lr_at(const TrainConfig& cfg, std::int64_t global_iter, std::int64_t iters_per_epoch);

struct EarlyStopState {
  double best_metric = -std::numeric_limits<double>::infinity();
  int evals_since_improvement = 0;
  double min_delta = 0.0;
  bool stopped = false;

  friend bool operator==(const EarlyStopState&, const EarlyStopState&) = default;
};

/// Folds one validation result (higher is better) into the state. Returns the
/// new state and whether training should stop. Throws ValidationError on NaN.
std::pair<EarlyStopState, bool> early_stop_update(EarlyStopState state, double metric, int patience);

/// 1-based index of the evaluation at which training stops, if it does.
std::optional<std::size_t> early_stop_at(const std::vector<double>& series, int patience, double min_delta = 0.0);

/// 1000, 2000, 4000, ... up to total_available; total_available closes the
/// ladder when the next step would exceed it.
std::vector<std::size_t> ntrain_sizes(std::size_t total_available);

struct SweepSpec {
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> seeds;
};

/// Training-set sizes with an independent sampling seed for each.
SweepSpec make_sweep(std::size_t total_available, std::uint64_t seed);

struct BaselineRow {
  std::string source;
  std::string metric;
  double ap50 = 0.0;
};

using BaselineTable = std::vector<BaselineRow>;

/// Best published AP.50 results on the People-Art test set.
BaselineTable people_art_baselines();

struct LabelledReport {
  std::string label;
  ApReport report;
};

struct ComparisonTable {
  struct Row {
    std::string source;
    std::string metric;
    std::optional<double> ap;
    std::optional<double> ap50;
    std::optional<double> ap75;
    bool ours = false;
  };
  std::vector<Row> rows;
  std::optional<std::size_t> best_ours;      // index into rows
  std::optional<std::size_t> best_baseline;  // index into rows
  /// Best own AP.50 minus best baseline AP.50.
  std::optional<double> delta;

  std::string render_text() const;
  std::string render_csv() const;
};

ComparisonTable comparison_table(const std::vector<LabelledReport>& ours, const BaselineTable& baselines);

struct TrainPaths {
  std::string train_annotations;
  std::string train_images;
  std::string val_annotations;
  std::string val_images;

  friend bool operator==(const TrainPaths&, const TrainPaths&) = default;
};

/// key=value lines, one per hyperparameter and path. Validates before rendering.
std::string emit_train_config(const TrainConfig& cfg, const TrainPaths& paths);

/// Parses emit_train_config output. Unknown keys, duplicates and bad values throw.
std::pair<TrainConfig, TrainPaths> parse_train_config(std::string_view text);

/// One line of the training metrics log written by the detector adapter.
struct MetricsRow {
  std::int64_t iteration = 0;
  std::int64_t epoch = 0;
  double lr = 0.0;
  /// Present on rows logged right after a validation pass.
  std::optional<double> val_ap50;
  std::optional<double> val_ap;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

struct MetricsLog {
  std::int64_t iters_per_epoch = 0;
  std::vector<MetricsRow> rows;

  friend bool operator==(const MetricsLog&, const MetricsLog&) = default;
};

/// Tab-separated: a "# artforge metrics log v1" line, "# iters_per_epoch=<n>",
/// the column line "iteration\tepoch\tlr\tval_ap50\tval_ap", then one row per
/// logged iteration with "-" for absent validation values.
std::string write_metrics_log(const MetricsLog& log);
MetricsLog parse_metrics_log(std::string_view text);

struct ScheduleMismatch {
  std::size_t row = 0;
  double expected = 0.0;
  double logged = 0.0;
};

/// Rows whose lr differs from lr_at by more than `tolerance`, or whose epoch
/// disagrees with the iteration.
std::vector<ScheduleMismatch> check_schedule(const TrainConfig& cfg, const MetricsLog& log, double tolerance = 1e-9);

/// Validation series for the configured early-stop metric, in log order.
std::vector<double> validation_series(const TrainConfig& cfg, const MetricsLog& log);

}  // namespace artforge
