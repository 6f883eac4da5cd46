#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace artforge {

using Json = nlohmann::json;

/// Axis-aligned box in pixel coordinates, COCO convention (left, top, width, height).
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const noexcept { return w * h; }
  double right() const noexcept { return x + w; }
  double bottom() const noexcept { return y + h; }
  bool degenerate() const noexcept { return !(w > 0.0) || !(h > 0.0); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Annotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  BoundingBox bbox;
  bool is_crowd = false;
  // Fields carried through untouched: segmentation, area, keypoints, ...
  Json extra = Json::object();

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct ImageRecord {
  std::int64_t id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  Json extra = Json::object();

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct Category {
  std::int64_t id = 0;
  std::string name;
  Json extra = Json::object();

  friend bool operator==(const Category&, const Category&) = default;
};

/// Scored prediction in the COCO results format.
struct Detection {
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  BoundingBox bbox;
  double score = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

/// Validated in-memory index of a detection dataset.
///
/// Construction checks that ids are unique and that every annotation resolves
/// to an image and a category; a constructed index always satisfies these.
class DatasetIndex {
 public:
  DatasetIndex() = default;
  DatasetIndex(std::vector<ImageRecord> images, std::vector<Annotation> annotations,
               std::vector<Category> categories, Json extra = Json::object());

  const std::vector<ImageRecord>& images() const noexcept { return images_; }
  const std::vector<Annotation>& annotations() const noexcept { return annotations_; }
  const std::vector<Category>& categories() const noexcept { return categories_; }
  /// Top-level members other than images/annotations/categories (info, licenses, ...).
  const Json& extra() const noexcept { return extra_; }

  std::size_t n_images() const noexcept { return images_.size(); }

  const ImageRecord* find_image(std::int64_t image_id) const;
  const Category* find_category(std::int64_t category_id) const;
  bool has_category(std::int64_t category_id) const { return find_category(category_id) != nullptr; }

  /// Indices into annotations() for one image; empty for images without annotations.
  std::span<const std::size_t> annotations_for(std::int64_t image_id) const;

 private:
  std::vector<ImageRecord> images_;
  std::vector<Annotation> annotations_;
  std::vector<Category> categories_;
  Json extra_ = Json::object();

  std::unordered_map<std::int64_t, std::size_t> image_pos_;
  std::unordered_map<std::int64_t, std::size_t> category_pos_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> by_image_;
};

/// Order-insensitive equality: same images, annotations and categories keyed by id.
bool equivalent(const DatasetIndex& a, const DatasetIndex& b);

struct DatasetStats {
  std::size_t n_images = 0;
  std::size_t n_positive = 0;
  std::size_t n_people = 0;
  /// Crowd annotations among n_people.
  std::size_t n_people_crowd = 0;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

inline constexpr std::int64_t kCocoPersonCategory = 1;

/// Which annotations make an image "person positive".
struct PositivityRule {
  std::int64_t person_category = kCocoPersonCategory;
  /// When true, an image whose only person annotations are crowd regions still counts.
  bool include_crowd_only = false;
};

/// Images with at least one qualifying person annotation, restricted to the
/// person category. Throws ValidationError for an unknown category.
DatasetIndex filter_person_positive(const DatasetIndex& ds, const PositivityRule& rule = {});

/// Exactly `n` images drawn uniformly without replacement. Images are visited in
/// ascending id order, so the draw does not depend on file ordering.
DatasetIndex subset_sample(const DatasetIndex& ds, std::size_t n, std::uint64_t seed);

DatasetStats dataset_stats(const DatasetIndex& ds, const PositivityRule& rule = {});

/// Keeps only `keep` image ids (and their annotations); categories are retained.
DatasetIndex restrict_images(const DatasetIndex& ds, std::span<const std::int64_t> keep);

/// Returns `ds` with file_name fields replaced through `rename`.
template <typename Fn>
DatasetIndex with_file_names(const DatasetIndex& ds, Fn&& rename) {
  std::vector<ImageRecord> images = ds.images();
  for (auto& img : images) img.file_name = rename(img);
  return DatasetIndex(std::move(images), ds.annotations(), ds.categories(), ds.extra());
}

}  // namespace artforge
