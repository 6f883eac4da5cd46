#pragma once

// Random small detection scenes with crowd regions and score ties.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "artforge/annotations.hpp"
#include "artforge/rng.hpp"
#include "reference_eval.hpp"

namespace artforge::testing {

struct Scene {
  DatasetIndex gt;
  std::vector<Detection> dets;
  RefScene ref;
};

inline BoundingBox random_box(DeterministicRng& rng) {
  // Integer grid keeps IoU ties exact and frequent.
  const double x = static_cast<double>(rng.uniform_below(12));
  const double y = static_cast<double>(rng.uniform_below(12));
  const double w = static_cast<double>(1 + rng.uniform_below(8));
  const double h = static_cast<double>(1 + rng.uniform_below(8));
  return {x, y, w, h};
}

inline BoundingBox jitter(const BoundingBox& b, DeterministicRng& rng) {
  auto d = [&] { return static_cast<double>(rng.uniform_below(3)) - 1.0; };
  BoundingBox out{b.x + d(), b.y + d(), b.w + d(), b.h + d()};
  if (out.w < 1) out.w = 1;
  if (out.h < 1) out.h = 1;
  return out;
}

inline Scene random_scene(DeterministicRng& rng, std::size_t max_images = 4, std::size_t max_gts = 5,
                          std::size_t max_dets = 8) {
  const std::size_t n_images = 1 + rng.uniform_below(max_images);
  std::vector<ImageRecord> images;
  std::vector<Annotation> anns;
  Scene s;
  std::int64_t ann_id = 1;
  // Shuffled, non-contiguous image ids.
  std::vector<std::int64_t> ids;
  for (std::size_t i = 0; i < n_images; ++i) ids.push_back(static_cast<std::int64_t>(10 * (i + 1) + rng.uniform_below(5)));
  for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.uniform_below(i)]);

  for (std::int64_t id : ids) {
    images.push_back({id, "img_" + std::to_string(id) + ".jpg", 32, 32, Json::object()});
    s.ref.images.push_back(id);
    const std::size_t n_gt = rng.uniform_below(max_gts + 1);
    std::vector<BoundingBox> boxes;
    for (std::size_t g = 0; g < n_gt; ++g) {
      const BoundingBox b = random_box(rng);
      const bool crowd = rng.uniform_below(5) == 0;
      boxes.push_back(b);
      anns.push_back({ann_id++, id, kCocoPersonCategory, b, crowd, Json::object()});
      s.ref.gts.push_back({id, {b.x, b.y, b.w, b.h}, crowd});
    }
    const std::size_t n_det = rng.uniform_below(max_dets + 1);
    for (std::size_t d = 0; d < n_det; ++d) {
      BoundingBox b = (!boxes.empty() && rng.uniform_below(3) != 0) ? jitter(boxes[rng.uniform_below(boxes.size())], rng)
                                                                     : random_box(rng);
      // Few distinct scores so ties are common.
      const double score = static_cast<double>(1 + rng.uniform_below(5)) / 5.0;
      s.dets.push_back({id, kCocoPersonCategory, b, score});
      s.ref.dets.push_back({id, {b.x, b.y, b.w, b.h}, score});
    }
  }
  s.gt = DatasetIndex(std::move(images), std::move(anns), {Category{kCocoPersonCategory, "person", Json::object()}});
  return s;
}

}  // namespace artforge::testing
