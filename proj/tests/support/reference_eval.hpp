#pragma once

// Exhaustive reference for the COCO box protocol, written with explicit loops
// and no shared code with the evaluator under test.

#include <cstdint>
#include <optional>
#include <vector>

#include "artforge/annotations.hpp"

namespace artforge::testing {

struct RefBox {
  double x, y, w, h;
};

inline double ref_intersection(const RefBox& a, const RefBox& b) {
  double left = a.x > b.x ? a.x : b.x;
  double top = a.y > b.y ? a.y : b.y;
  double right = (a.x + a.w) < (b.x + b.w) ? (a.x + a.w) : (b.x + b.w);
  double bottom = (a.y + a.h) < (b.y + b.h) ? (a.y + a.h) : (b.y + b.h);
  if (right <= left || bottom <= top) return 0.0;
  return (right - left) * (bottom - top);
}

inline double ref_iou(const RefBox& a, const RefBox& b) {
  double inter = ref_intersection(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (a.w * a.h + b.w * b.h - inter);
}

inline double ref_crowd(const RefBox& det, const RefBox& crowd) {
  double inter = ref_intersection(det, crowd);
  if (inter <= 0.0) return 0.0;
  return inter / (det.w * det.h);
}

struct RefScene {
  struct Gt {
    std::int64_t image;
    RefBox box;
    bool crowd;
  };
  struct Det {
    std::int64_t image;
    RefBox box;
    double score;
  };
  std::vector<std::int64_t> images;  // any order
  std::vector<Gt> gts;
  std::vector<Det> dets;
};

/// AP at one threshold, or nullopt when there are no non-crowd ground truths.
inline std::optional<double> ref_ap(const RefScene& s, double t, std::size_t max_dets, std::size_t recall_points) {
  struct Scored {
    double score;
    std::int64_t image;
    std::size_t rank;
    int outcome;  // 1 tp, 0 fp, -1 ignored
  };
  std::vector<Scored> pooled;
  std::size_t n_gt = 0;
  for (const auto& g : s.gts)
    if (!g.crowd) ++n_gt;

  for (std::int64_t img : s.images) {
    std::vector<std::size_t> gi, di;
    for (std::size_t i = 0; i < s.gts.size(); ++i)
      if (s.gts[i].image == img) gi.push_back(i);
    for (std::size_t i = 0; i < s.dets.size(); ++i)
      if (s.dets[i].image == img) di.push_back(i);

    // Selection sort by score, ties by input position.
    std::vector<std::size_t> order;
    std::vector<bool> used(di.size(), false);
    for (std::size_t round = 0; round < di.size(); ++round) {
      std::size_t pick = di.size();
      for (std::size_t j = 0; j < di.size(); ++j) {
        if (used[j]) continue;
        if (pick == di.size() || s.dets[di[j]].score > s.dets[di[pick]].score) pick = j;
      }
      used[pick] = true;
      order.push_back(di[pick]);
    }
    if (order.size() > max_dets) order.resize(max_dets);

    std::vector<bool> matched(gi.size(), false);
    for (std::size_t r = 0; r < order.size(); ++r) {
      const auto& d = s.dets[order[r]];
      int best = -1;
      double best_iou = -1.0;
      for (std::size_t k = 0; k < gi.size(); ++k) {
        const auto& g = s.gts[gi[k]];
        if (g.crowd || matched[k]) continue;
        double o = ref_iou(d.box, g.box);
        if (o < t) continue;
        if (o > best_iou) {
          best_iou = o;
          best = static_cast<int>(k);
        }
      }
      int outcome = 0;
      if (best >= 0) {
        matched[static_cast<std::size_t>(best)] = true;
        outcome = 1;
      } else {
        for (std::size_t k = 0; k < gi.size(); ++k) {
          const auto& g = s.gts[gi[k]];
          if (g.crowd && ref_crowd(d.box, g.box) >= t) outcome = -1;
        }
      }
      pooled.push_back({d.score, img, r, outcome});
    }
  }
  if (n_gt == 0) return std::nullopt;

  // Global order: score desc, then image id asc, then in-image rank.
  std::vector<Scored> ranked;
  std::vector<bool> taken(pooled.size(), false);
  for (std::size_t round = 0; round < pooled.size(); ++round) {
    std::size_t pick = pooled.size();
    for (std::size_t j = 0; j < pooled.size(); ++j) {
      if (taken[j]) continue;
      if (pick == pooled.size()) {
        pick = j;
        continue;
      }
      const auto& a = pooled[j];
      const auto& b = pooled[pick];
      bool better = a.score > b.score || (a.score == b.score && (a.image < b.image || (a.image == b.image && a.rank < b.rank)));
      if (better) pick = j;
    }
    taken[pick] = true;
    if (pooled[pick].outcome >= 0) ranked.push_back(pooled[pick]);
  }

  std::vector<std::size_t> tp_at(ranked.size());
  std::vector<double> prec_at(ranked.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (ranked[k].outcome == 1) ++tp;
    tp_at[k] = tp;
    prec_at[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < recall_points; ++i) {
    double best = 0.0;
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      // recall_k >= i/(R-1), compared exactly in integers
      if (tp_at[k] * (recall_points - 1) >= i * n_gt && prec_at[k] > best) best = prec_at[k];
    }
    sum += best;
  }
  return sum / static_cast<double>(recall_points);
}

}  // namespace artforge::testing
