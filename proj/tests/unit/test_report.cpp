#include <doctest.h>

#include "artforge/coco_io.hpp"
#include "artforge/report.hpp"
#include "artforge/rng.hpp"
#include "support/scenes.hpp"
#include "support/temp_dir.hpp"

using namespace artforge;

TEST_CASE("summary rendering") {
  const ApReport r = summary_report(0.36, 0.68, 0.33);
  CHECK(summary_line(r) == "AP=0.360 AP.50=0.680 AP.75=0.330");
  const Json j = Json::parse(summary_json(r));
  CHECK(j["ap"] == 0.36);
  CHECK(j["ap50"] == 0.68);
  CHECK(j["ap75"] == 0.33);

  const ApReport undefined;
  CHECK(Json::parse(summary_json(undefined))["ap"].is_null());
  CHECK(summary_line(undefined).find("AP=") != std::string::npos);
}

TEST_CASE("PR curve CSV round trip") {
  DeterministicRng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto scene = artforge::testing::random_scene(rng);
    const ApReport r = evaluate(scene.gt, scene.dets);
    const std::string csv = pr_curves_csv(r);
    CHECK(csv.starts_with("threshold,recall,precision\n"));
    const auto blocks = parse_pr_curves_csv(csv);
    // Empty curves contribute no rows.
    std::vector<const ThresholdResult*> nonempty;
    for (const auto& t : r.per_threshold)
      if (!t.curve.points.empty()) nonempty.push_back(&t);
    REQUIRE(blocks.size() == nonempty.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      CHECK(blocks[i].first == nonempty[i]->threshold);
      const auto& pts = nonempty[i]->curve.points;
      REQUIRE(blocks[i].second.size() == pts.size());
      for (std::size_t k = 0; k < pts.size(); ++k) {
        CHECK(blocks[i].second[k].recall == pts[k].recall);
        CHECK(blocks[i].second[k].precision == pts[k].precision);
      }
    }
  }
}

TEST_CASE("export_report writes all files") {
  artforge::testing::TempDir dir;
  DeterministicRng rng(2);
  // Perfect detections so that every threshold has a curve.
  artforge::testing::Scene scene;
  std::vector<Detection> dets;
  while (dets.empty()) {
    scene = artforge::testing::random_scene(rng);
    for (const auto& a : scene.gt.annotations())
      if (!a.is_crowd) dets.push_back({a.image_id, a.category_id, a.bbox, 0.9});
  }
  const ApReport r = evaluate(scene.gt, dets);
  const ExportedReport out = export_report(r, dir.path() / "nested", true);
  CHECK(std::filesystem::exists(out.csv));
  CHECK(std::filesystem::exists(out.summary));
  CHECK(std::filesystem::exists(out.svg));
  CHECK(read_text_file(out.svg).starts_with("<svg"));
  CHECK(parse_pr_curves_csv(read_text_file(out.csv)).size() == 10);
  const ExportedReport no_svg = export_report(r, dir.path() / "plain");
  CHECK(no_svg.svg.empty());
}
