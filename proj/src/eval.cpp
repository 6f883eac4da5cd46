#include "artforge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "artforge/error.hpp"
#include "artforge/parallel.hpp"

namespace artforge {

std::vector<double> coco_iou_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(static_cast<double>(50 + 5 * i) / 100.0);
  return t;
}

void EvalConfig::validate() const {
  if (iou_thresholds.empty()) throw ValidationError("at least one IoU threshold is required");
  for (std::size_t i = 0; i < iou_thresholds.size(); ++i) {
    const double t = iou_thresholds[i];
    if (!(t > 0.0 && t <= 1.0)) throw ValidationError("IoU threshold outside (0, 1]", {i});
    if (i > 0 && !(t > iou_thresholds[i - 1]))
      throw ValidationError("IoU thresholds must be strictly increasing", {i});
  }
  if (recall_points < 2) throw ValidationError("recall_points must be >= 2");
  if (max_dets_per_image == 0) throw ValidationError("max_dets_per_image must be positive");
}

namespace {

double intersection(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

}  // namespace

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double inter = intersection(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double crowd_overlap(const BoundingBox& det, const BoundingBox& crowd) noexcept {
  const double inter = intersection(det, crowd);
  const double area = det.area();
  return (inter > 0.0 && area > 0.0) ? inter / area : 0.0;
}

MatchResult match_image(std::span<const Annotation> gts, std::span<const Detection> dets, double threshold,
                        std::size_t max_dets) {
  MatchResult out;
  const bool have_image = !gts.empty() || !dets.empty();
  if (have_image) out.image_id = gts.empty() ? dets.front().image_id : gts.front().image_id;
  const std::int64_t category = gts.empty() ? (dets.empty() ? 0 : dets.front().category_id) : gts.front().category_id;
  for (const auto& g : gts)
    if (g.image_id != out.image_id || g.category_id != category)
      throw ValidationError("match_image: ground truths span several images or categories");
  for (const auto& d : dets)
    if (d.image_id != out.image_id || d.category_id != category)
      throw ValidationError("match_image: detections span several images or categories");

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
  if (order.size() > max_dets) order.resize(max_dets);

  for (const auto& g : gts)
    if (!g.is_crowd) ++out.n_gt;

  std::vector<bool> taken(gts.size(), false);
  out.detections.reserve(order.size());
  for (std::size_t di : order) {
    const Detection& d = dets[di];
    MatchedDetection m{d.score, di, std::nullopt, false};

    std::optional<std::size_t> best;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gts[g].is_crowd || taken[g]) continue;
      const double o = iou(d.bbox, gts[g].bbox);
      if (o >= threshold && (!best || o > best_iou)) {
        best = g;
        best_iou = o;
      }
    }
    if (best) {
      taken[*best] = true;
      m.matched_gt = gts[*best].id;
    } else {
      std::optional<std::size_t> crowd;
      double best_overlap = 0.0;
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (!gts[g].is_crowd) continue;
        const double o = crowd_overlap(d.bbox, gts[g].bbox);
        if (o >= threshold && (!crowd || o > best_overlap)) {
          crowd = g;
          best_overlap = o;
        }
      }
      if (crowd) {
        m.matched_gt = gts[*crowd].id;
        m.ignored = true;
      }
    }
    out.detections.push_back(m);
  }
  return out;
}

PrCurve pr_curve(std::span<const MatchResult> matches) {
  struct Pooled {
    double score;
    bool tp;
  };
  std::vector<const MatchResult*> images;
  images.reserve(matches.size());
  for (const auto& m : matches) images.push_back(&m);
  std::stable_sort(images.begin(), images.end(),
                   [](const MatchResult* a, const MatchResult* b) { return a->image_id < b->image_id; });

  PrCurve curve;
  std::vector<Pooled> pooled;
  for (const MatchResult* m : images) {
    curve.n_gt += m->n_gt;
    for (const auto& d : m->detections)
      if (!d.ignored) pooled.push_back({d.score, d.true_positive()});
  }
  std::stable_sort(pooled.begin(), pooled.end(), [](const Pooled& a, const Pooled& b) { return a.score > b.score; });
  if (curve.n_gt == 0) return curve;

  std::size_t tp = 0, fp = 0;
  curve.points.reserve(pooled.size());
  for (const auto& p : pooled) {
    (p.tp ? tp : fp) += 1;
    curve.points.push_back({static_cast<double>(tp) / static_cast<double>(curve.n_gt),
                            static_cast<double>(tp) / static_cast<double>(tp + fp), p.score});
  }
  return curve;
}

double ap_interpolated(const PrCurve& curve, std::size_t recall_points) {
  if (!curve.defined()) throw UndefinedMetric();
  if (recall_points < 2) throw ValidationError("recall_points must be >= 2");
  const auto& pts = curve.points;
  std::vector<double> envelope(pts.size());
  double running = 0.0;
  for (std::size_t i = pts.size(); i-- > 0;) {
    running = std::max(running, pts[i].precision);
    envelope[i] = running;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < recall_points; ++k) {
    const double r = static_cast<double>(k) / static_cast<double>(recall_points - 1);
    auto it = std::lower_bound(pts.begin(), pts.end(), r,
                               [](const PrPoint& p, double value) { return p.recall < value; });
    if (it != pts.end()) sum += envelope[static_cast<std::size_t>(it - pts.begin())];
  }
  return sum / static_cast<double>(recall_points);
}

const ThresholdResult* ApReport::at(double threshold) const {
  for (const auto& t : per_threshold)
    if (std::abs(t.threshold - threshold) < 1e-9) return &t;
  return nullptr;
}

ApReport evaluate(const DatasetIndex& gt, std::span<const Detection> dets, const EvalConfig& cfg) {
  cfg.validate();
  if (!gt.has_category(cfg.category))
    throw ValidationError("category " + std::to_string(cfg.category) + " not present in ground truth");

  // Per image, ascending id: ground truths of the category and its detections.
  std::map<std::int64_t, std::pair<std::vector<Annotation>, std::vector<Detection>>> per_image;
  for (const auto& img : gt.images()) {
    auto& slot = per_image[img.id];
    for (std::size_t i : gt.annotations_for(img.id))
      if (gt.annotations()[i].category_id == cfg.category) slot.first.push_back(gt.annotations()[i]);
  }
  std::vector<std::size_t> unknown;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    auto it = per_image.find(dets[i].image_id);
    if (it == per_image.end()) {
      unknown.push_back(i);
      continue;
    }
    if (dets[i].category_id == cfg.category) it->second.second.push_back(dets[i]);
  }
  if (!unknown.empty())
    throw ValidationError(std::to_string(unknown.size()) + " detection(s) refer to images absent from the ground truth",
                          std::move(unknown));

  std::vector<const std::pair<std::vector<Annotation>, std::vector<Detection>>*> cells;
  for (const auto& [id, cell] : per_image)
    if (!cell.first.empty() || !cell.second.empty()) cells.push_back(&cell);

  const std::size_t T = cfg.iou_thresholds.size();
  // matches[t][image]
  std::vector<std::vector<MatchResult>> matches(T, std::vector<MatchResult>(cells.size()));
  parallel_for(cells.size(), cfg.workers, [&](std::size_t i) {
    for (std::size_t t = 0; t < T; ++t)
      matches[t][i] = match_image(cells[i]->first, cells[i]->second, cfg.iou_thresholds[t], cfg.max_dets_per_image);
  });

  ApReport report;
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t t = 0; t < T; ++t) {
    ThresholdResult r;
    r.threshold = cfg.iou_thresholds[t];
    r.curve = pr_curve(matches[t]);
    if (r.curve.defined()) {
      r.ap = ap_interpolated(r.curve, cfg.recall_points);
      sum += *r.ap;
      ++defined;
    }
    report.per_threshold.push_back(std::move(r));
  }
  if (defined > 0) report.ap = sum / static_cast<double>(defined);
  if (const auto* r = report.at(0.50)) report.ap50 = r->ap;
  if (const auto* r = report.at(0.75)) report.ap75 = r->ap;
  return report;
}

ApReport summary_report(double ap, double ap50, double ap75) {
  ApReport r;
  r.ap = ap;
  r.ap50 = ap50;
  r.ap75 = ap75;
  return r;
}

}  // namespace artforge
