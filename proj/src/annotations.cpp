#include "artforge/annotations.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "artforge/error.hpp"
#include "artforge/rng.hpp"

namespace artforge {

DatasetIndex::DatasetIndex(std::vector<ImageRecord> images, std::vector<Annotation> annotations,
                           std::vector<Category> categories, Json extra)
    : images_(std::move(images)),
      annotations_(std::move(annotations)),
      categories_(std::move(categories)),
      extra_(std::move(extra)) {
  image_pos_.reserve(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (!image_pos_.emplace(images_[i].id, i).second)
      throw ValidationError("duplicate image id " + std::to_string(images_[i].id), {i});
  }
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (!category_pos_.emplace(categories_[i].id, i).second)
      throw ValidationError("duplicate category id " + std::to_string(categories_[i].id), {i});
  }
  std::unordered_set<std::int64_t> ann_ids;
  ann_ids.reserve(annotations_.size());
  for (std::size_t i = 0; i < annotations_.size(); ++i) {
    const Annotation& a = annotations_[i];
    if (!ann_ids.insert(a.id).second)
      throw ValidationError("duplicate annotation id " + std::to_string(a.id), {i});
    if (!image_pos_.contains(a.image_id))
      throw ValidationError("annotation " + std::to_string(a.id) + " refers to unknown image " +
                                std::to_string(a.image_id),
                            {i});
    if (!category_pos_.contains(a.category_id))
      throw ValidationError("annotation " + std::to_string(a.id) + " refers to unknown category " +
                                std::to_string(a.category_id),
                            {i});
    by_image_[a.image_id].push_back(i);
  }
}

const ImageRecord* DatasetIndex::find_image(std::int64_t image_id) const {
  auto it = image_pos_.find(image_id);
  return it == image_pos_.end() ? nullptr : &images_[it->second];
}

const Category* DatasetIndex::find_category(std::int64_t category_id) const {
  auto it = category_pos_.find(category_id);
  return it == category_pos_.end() ? nullptr : &categories_[it->second];
}

std::span<const std::size_t> DatasetIndex::annotations_for(std::int64_t image_id) const {
  auto it = by_image_.find(image_id);
  if (it == by_image_.end()) return {};
  return it->second;
}

namespace {

template <typename T>
std::map<std::int64_t, const T*> by_id(const std::vector<T>& items) {
  std::map<std::int64_t, const T*> out;
  for (const auto& item : items) out.emplace(item.id, &item);
  return out;
}

template <typename T>
bool same_by_id(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  auto ma = by_id(a);
  auto mb = by_id(b);
  return std::equal(ma.begin(), ma.end(), mb.begin(), mb.end(),
                    [](const auto& x, const auto& y) { return x.first == y.first && *x.second == *y.second; });
}

bool qualifies(const Annotation& a, const PositivityRule& rule) {
  return a.category_id == rule.person_category && (rule.include_crowd_only || !a.is_crowd);
}

}  // namespace

bool equivalent(const DatasetIndex& a, const DatasetIndex& b) {
  return same_by_id(a.images(), b.images()) && same_by_id(a.annotations(), b.annotations()) &&
         same_by_id(a.categories(), b.categories()) && a.extra() == b.extra();
}

DatasetIndex filter_person_positive(const DatasetIndex& ds, const PositivityRule& rule) {
  const Category* person = ds.find_category(rule.person_category);
  if (person == nullptr)
    throw ValidationError("unknown person category id " + std::to_string(rule.person_category));

  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;
  for (const auto& img : ds.images()) {
    auto idx = ds.annotations_for(img.id);
    const bool positive = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) {
      return qualifies(ds.annotations()[i], rule);
    });
    if (!positive) continue;
    images.push_back(img);
    for (std::size_t i : idx)
      if (ds.annotations()[i].category_id == rule.person_category) annotations.push_back(ds.annotations()[i]);
  }
  return DatasetIndex(std::move(images), std::move(annotations), {*person}, ds.extra());
}

DatasetIndex restrict_images(const DatasetIndex& ds, std::span<const std::int64_t> keep) {
  std::unordered_set<std::int64_t> wanted(keep.begin(), keep.end());
  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;
  for (const auto& img : ds.images()) {
    if (!wanted.contains(img.id)) continue;
    images.push_back(img);
    for (std::size_t i : ds.annotations_for(img.id)) annotations.push_back(ds.annotations()[i]);
  }
  return DatasetIndex(std::move(images), std::move(annotations), ds.categories(), ds.extra());
}

DatasetIndex subset_sample(const DatasetIndex& ds, std::size_t n, std::uint64_t seed) {
  if (n < 1 || n > ds.n_images())
    throw ValidationError("sample size " + std::to_string(n) + " outside [1, " +
                          std::to_string(ds.n_images()) + "]");
  std::vector<std::int64_t> ids;
  ids.reserve(ds.n_images());
  for (const auto& img : ds.images()) ids.push_back(img.id);
  std::sort(ids.begin(), ids.end());

  // Partial Fisher-Yates: the first n slots end up a uniform n-subset.
  DeterministicRng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(ids.size() - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(n);
  std::sort(ids.begin(), ids.end());

  DatasetIndex picked = restrict_images(ds, ids);
  std::vector<ImageRecord> images = picked.images();
  std::sort(images.begin(), images.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return DatasetIndex(std::move(images), picked.annotations(), picked.categories(), picked.extra());
}

DatasetStats dataset_stats(const DatasetIndex& ds, const PositivityRule& rule) {
  DatasetStats stats;
  stats.n_images = ds.n_images();
  for (const auto& img : ds.images()) {
    bool positive = false;
    for (std::size_t i : ds.annotations_for(img.id)) {
      const Annotation& a = ds.annotations()[i];
      if (a.category_id != rule.person_category) continue;
      ++stats.n_people;
      if (a.is_crowd) ++stats.n_people_crowd;
      positive = positive || qualifies(a, rule);
    }
    if (positive) ++stats.n_positive;
  }
  return stats;
}

}  // namespace artforge
