#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "artforge/annotations.hpp"

namespace artforge {

/// 0.50, 0.55, ..., 0.95.
std::vector<double> coco_iou_thresholds();

struct EvalConfig {
  std::vector<double> iou_thresholds = coco_iou_thresholds();
  std::size_t recall_points = 101;
  std::size_t max_dets_per_image = 100;
  std::int64_t category = kCocoPersonCategory;
  /// Threads used for per-image matching; results do not depend on it.
  std::size_t workers = 1;

  /// Throws ValidationError unless thresholds are strictly increasing in (0, 1]
  /// and recall_points >= 2.
  void validate() const;
};

double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Intersection over the detection's own area; the overlap used against crowd regions.
double crowd_overlap(const BoundingBox& det, const BoundingBox& crowd) noexcept;

struct MatchedDetection {
  double score = 0.0;
  /// Position of the detection in the input list.
  std::size_t input_index = 0;
  /// Id of the matched ground truth (a crowd region when `ignored`).
  std::optional<std::int64_t> matched_gt;
  /// Absorbed by a crowd region: neither true nor false positive.
  bool ignored = false;

  bool true_positive() const noexcept { return matched_gt.has_value() && !ignored; }
  bool false_positive() const noexcept { return !matched_gt.has_value() && !ignored; }
};

/// Greedy matching outcome for one image at one IoU threshold.
struct MatchResult {
  std::int64_t image_id = 0;
  /// In descending score order, at most max_dets entries.
  std::vector<MatchedDetection> detections;
  /// Non-crowd ground truths.
  std::size_t n_gt = 0;
};

/// COCO greedy matching. Detections are taken in descending score (ties keep
/// input order) and truncated to `max_dets`; each takes the unmatched non-crowd
/// ground truth of highest IoU >= threshold (ties: lowest index), otherwise it
/// is ignored if it overlaps a crowd region by >= threshold of its own area.
/// Throws ValidationError if the inputs span more than one image or category.
MatchResult match_image(std::span<const Annotation> gts, std::span<const Detection> dets, double threshold,
                        std::size_t max_dets = 100);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
  double score = 0.0;

  friend bool operator==(const PrPoint&, const PrPoint&) = default;
};

/// One point per scored (non-ignored) detection, pooled over images.
struct PrCurve {
  std::vector<PrPoint> points;
  std::size_t n_gt = 0;

  /// Without ground truth neither recall nor AP exists.
  bool defined() const noexcept { return n_gt > 0; }
};

/// Pools the images' matches (ascending image id, then stable descending score)
/// and accumulates precision and recall.
PrCurve pr_curve(std::span<const MatchResult> matches);

/// Mean of the precision envelope over `recall_points` evenly spaced recall
/// levels in [0, 1]. Throws UndefinedMetric for a curve without ground truth.
double ap_interpolated(const PrCurve& curve, std::size_t recall_points = 101);

class UndefinedMetric : public std::exception {
 public:
  const char* what() const noexcept override { return "average precision undefined: no ground truth"; }
};

struct ThresholdResult {
  double threshold = 0.0;
  /// Empty when no ground truth exists.
  std::optional<double> ap;
  PrCurve curve;
};

struct ApReport {
  std::optional<double> ap;
  std::optional<double> ap50;
  std::optional<double> ap75;
  std::vector<ThresholdResult> per_threshold;

  bool defined() const noexcept { return ap.has_value(); }
  /// Lookup by threshold value (to within 1e-9); nullptr if absent.
  const ThresholdResult* at(double threshold) const;
};

/// Full evaluation of one category: matching per image and threshold, PR curves,
/// interpolated AP. Throws ValidationError when the category is missing from the
/// ground truth or a detection refers to an unknown image.
ApReport evaluate(const DatasetIndex& gt, std::span<const Detection> dets, const EvalConfig& cfg = {});

/// Report built from known AP values with no curves, e.g. published numbers.
ApReport summary_report(double ap, double ap50, double ap75);

}  // namespace artforge
