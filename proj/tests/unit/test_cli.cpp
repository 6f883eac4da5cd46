#include <doctest.h>

#include <sstream>

#include "artforge/cli.hpp"
#include "artforge/coco_io.hpp"
#include "artforge/forge.hpp"
#include "artforge/harness.hpp"
#include "support/forge_fixture.hpp"
#include "support/temp_dir.hpp"

using namespace artforge;
using artforge::testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

void write_eval_fixture(const TempDir& dir) {
  const DatasetIndex gt({{1, "1.jpg", 100, 100}}, {{1, 1, 1, {0, 0, 10, 10}, false}}, {{1, "person"}});
  write_text_file(dir / "gt.json", write_dataset(gt));
  write_text_file(dir / "dets.json", write_detections({{1, 1, {0, 0, 10, 6}, 0.9}}));
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"evaluate", "--gt", "/nonexistent.json", "--dets", "/nonexistent.json"}).code == kExitUsage);
  CHECK(cli({"--log-level", "loud", "sweep", "--total", "5000"}).code == kExitUsage);
  const Run help = cli({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("forge") != std::string::npos);
  CHECK(cli({"--version"}).out.find(kVersion) != std::string::npos);
}

TEST_CASE("stochastic subcommands require a seed") {
  TempDir dir;
  write_eval_fixture(dir);
  const Run r = cli({"sample", "--coco", (dir / "gt.json").string(), "--n", "1", "--out", (dir / "s.json").string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("--seed") != std::string::npos);
  CHECK(cli({"--seed", "3", "sample", "--coco", (dir / "gt.json").string(), "--n", "1", "--out",
             (dir / "s.json").string()})
            .code == kExitOk);
  CHECK(std::filesystem::exists(dir / "s.json.run.json"));
}

TEST_CASE("evaluate prints the summary and writes the report") {
  TempDir dir;
  write_eval_fixture(dir);
  const Run r = cli({"evaluate", "--gt", (dir / "gt.json").string(), "--dets", (dir / "dets.json").string(), "--out",
                     (dir / "eval").string(), "--svg"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "AP=0.300 AP.50=1.000 AP.75=0.000\n");
  for (const char* f : {"pr_curves.csv", "summary.json", "pr_curves.svg", "run.json"})
    CHECK(std::filesystem::exists(dir / "eval" / f));
  const Json run = Json::parse(read_text_file(dir / "eval" / "run.json"));
  CHECK(run["subcommand"] == "evaluate");
  CHECK(run["inputs"].size() == 2);
  CHECK(run["inputs"][0]["sha256"].get<std::string>().size() == 64);

  // A malformed detections file is a validation failure.
  write_text_file(dir / "bad.json", R"([{"image_id": 1, "category_id": 1, "bbox": [0, 0, 1, 1], "score": 2}])");
  CHECK(cli({"evaluate", "--gt", (dir / "gt.json").string(), "--dets", (dir / "bad.json").string(), "--out",
             (dir / "eval2").string()})
            .code == kExitFailure);
}

TEST_CASE("sweep and report") {
  const Run s = cli({"sweep", "--total", "58672"});
  CHECK(s.code == kExitOk);
  CHECK(s.out.starts_with("7 models\n1000\tseed="));

  TempDir dir;
  const Run r = cli({"report", "--inject", "StyleCOCO=0.36,0.68,0.33", "--out", (dir / "report").string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("+0.10") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "report" / "comparison.csv"));
  CHECK(cli({"report", "--inject", "x=0.3,0.4"}).code == kExitUsage);
}

TEST_CASE("sweep materializes subsets and configs") {
  TempDir dir;
  std::vector<ImageRecord> images;
  for (std::int64_t i = 1; i <= 2500; ++i) images.push_back({i, std::to_string(i) + ".jpg", 10, 10});
  write_text_file(dir / "train.json", write_dataset(DatasetIndex(images, {}, {{1, "person"}})));
  const Run r = cli({"--seed", "5", "sweep", "--coco", (dir / "train.json").string(), "--images", "/imgs", "--out",
                     (dir / "sweep").string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.starts_with("3 models\n"));
  CHECK(load_dataset(dir / "sweep" / "train_2000.json").n_images() == 2000);
  const auto [cfg, paths] = parse_train_config(read_text_file(dir / "sweep" / "train_2500.cfg"));
  CHECK(cfg == TrainConfig{});
  CHECK(paths.train_images == "/imgs");
}

TEST_CASE("check-log") {
  TempDir dir;
  const TrainConfig cfg;
  write_text_file(dir / "train.cfg", emit_train_config(cfg, {"a", "b", "c", "d"}));
  MetricsLog log{100, {}};
  for (std::int64_t it = 0; it < 1000; it += 100) log.rows.push_back({it, it / 100, lr_at(cfg, it, 100), 0.5, 0.2});
  write_text_file(dir / "metrics.tsv", write_metrics_log(log));
  const Run ok = cli({"check-log", "--config", (dir / "train.cfg").string(), "--log", (dir / "metrics.tsv").string()});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("0 schedule mismatch(es)") != std::string::npos);
  CHECK(ok.out.find("early stop at evaluation 4") != std::string::npos);
  log.rows[3].lr *= 2;
  write_text_file(dir / "metrics.tsv", write_metrics_log(log));
  CHECK(cli({"check-log", "--config", (dir / "train.cfg").string(), "--log", (dir / "metrics.tsv").string()}).code ==
        kExitFailure);
}

TEST_CASE("forge and verify through the CLI; worker count does not change outputs") {
  TempDir dir;
  const auto fx = artforge::testing::make_forge_fixture(dir.path(), 8, 3, 4);
  write_text_file(dir / "coco.json", write_dataset(fx.dataset));
  auto forge_with = [&](const std::string& workers, const std::string& out) {
    return cli({"--seed", "11", "--workers", workers, "forge", "--coco", (dir / "coco.json").string(), "--images",
                fx.content_root.string(), "--styles", fx.style_root.string(), "--out", (dir / out).string()});
  };
  const Run one = forge_with("1", "f1");
  REQUIRE(one.code == kExitOk);
  REQUIRE(forge_with("8", "f8").code == kExitOk);
  CHECK(read_text_file(dir / "f1/annotations.json") == read_text_file(dir / "f8/annotations.json"));
  CHECK(read_text_file(dir / "f1/manifest.tsv") == read_text_file(dir / "f8/manifest.tsv"));
  for (const auto& e : parse_manifest(read_text_file(dir / "f1/manifest.tsv")).entries)
    CHECK(read_text_file(dir / "f1/images" / e.output_file) == read_text_file(dir / "f8/images" / e.output_file));

  const Run v = cli({"verify", "--original", (dir / "coco.json").string(), "--forged",
                     (dir / "f1/annotations.json").string(), "--manifest", (dir / "f1/manifest.tsv").string(),
                     "--images", (dir / "f1/images").string()});
  CHECK(v.code == kExitOk);
  CHECK(v.out == "0 violation(s)\n");

  // Tampered annotations fail verification.
  DatasetIndex forged = load_dataset(dir / "f1/annotations.json");
  std::vector<Annotation> anns = forged.annotations();
  anns[0].bbox.w += 1;
  write_text_file(dir / "tampered.json",
                  write_dataset(DatasetIndex(forged.images(), anns, forged.categories(), forged.extra())));
  const Run t = cli({"verify", "--original", (dir / "coco.json").string(), "--forged",
                     (dir / "tampered.json").string(), "--manifest", (dir / "f1/manifest.tsv").string()});
  CHECK(t.code == kExitFailure);
  CHECK(t.out.find("annotation:") != std::string::npos);
}

TEST_CASE("ingest and filter") {
  TempDir dir;
  const DatasetIndex ds({{1, "1.jpg", 10, 10}, {2, "2.jpg", 10, 10}, {3, "3.jpg", 10, 10}},
                        {{1, 1, 1, {0, 0, 5, 5}, false}, {2, 2, 1, {0, 0, 5, 5}, true}, {3, 3, 2, {0, 0, 5, 5}, false}},
                        {{1, "person"}, {2, "bicycle"}});
  write_text_file(dir / "coco.json", write_dataset(ds));
  const Run i = cli({"ingest", "--coco", (dir / "coco.json").string()});
  CHECK(i.code == kExitOk);
  CHECK(i.out.find("images=3 annotations=3") != std::string::npos);
  const Run f = cli({"filter", "--coco", (dir / "coco.json").string(), "--out", (dir / "p.json").string()});
  CHECK(f.code == kExitOk);
  CHECK(f.out.find("non-crowd (selected): images=1 positive=1 people=1") != std::string::npos);
  CHECK(f.out.find("crowd-inclusive: images=2 positive=2 people=2 (crowd=1)") != std::string::npos);
  CHECK(load_dataset(dir / "p.json").n_images() == 1);
}
