#pragma once

// Small on-disk corpus: content images, style images and a matching COCO index.

#include <filesystem>
#include <string>
#include <vector>

#include "artforge/annotations.hpp"
#include "artforge/forge.hpp"
#include "artforge/raster_io.hpp"
#include "artforge/rng.hpp"
#include "images.hpp"

namespace artforge::testing {

struct ForgeFixture {
  DatasetIndex dataset;
  StyleLibrary library{{{"placeholder", {}}}};
  std::filesystem::path content_root;
  std::filesystem::path style_root;
};

inline ForgeFixture make_forge_fixture(const std::filesystem::path& root, std::size_t n_images, std::size_t n_styles,
                                       std::uint64_t seed) {
  DeterministicRng rng(seed);
  ForgeFixture fx;
  fx.content_root = root / "content";
  fx.style_root = root / "styles";
  std::vector<ImageRecord> images;
  std::vector<Annotation> anns;
  std::int64_t ann_id = 1;
  for (std::size_t i = 0; i < n_images; ++i) {
    const auto id = static_cast<std::int64_t>(100 + 3 * i);
    const std::size_t w = 16 + rng.uniform_below(24), h = 12 + rng.uniform_below(20);
    // Nested directories exercise output path handling.
    const std::string name = (i % 2 ? "a/" : "b/") + std::to_string(id) + ".png";
    write_image(fx.content_root / name, random_image(rng, w, h), ImageFormat::png);
    images.push_back({id, name, static_cast<int>(w), static_cast<int>(h), Json{{"license", 1}}});
    for (std::size_t k = 1 + rng.uniform_below(3); k > 0; --k) {
      const BoundingBox b{rng.uniform(0, 8), rng.uniform(0, 6), rng.uniform(1, 8), rng.uniform(1, 6)};
      anns.push_back({ann_id++, id, kCocoPersonCategory, b, rng.uniform_below(6) == 0,
                      Json{{"area", b.area()}, {"segmentation", Json::array({Json::array({b.x, b.y, b.right(), b.y})})}}});
    }
  }
  for (std::size_t s = 0; s < n_styles; ++s)
    write_image(fx.style_root / ("style_" + std::to_string(s) + ".png"),
                random_image(rng, 20 + rng.uniform_below(30), 20 + rng.uniform_below(30)), ImageFormat::png);
  fx.dataset = DatasetIndex(std::move(images), std::move(anns), {{kCocoPersonCategory, "person", Json::object()}},
                            Json{{"info", {{"description", "fixture"}}}});
  fx.library = StyleLibrary::from_directory(fx.style_root);
  return fx;
}

}  // namespace artforge::testing
