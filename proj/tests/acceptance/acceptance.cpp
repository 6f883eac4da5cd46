// One line per acceptance criterion: PASS, FAIL or SKIP with the measured values.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <fmt/format.h>

#include "artforge/coco_io.hpp"
#include "artforge/eval.hpp"
#include "artforge/forge.hpp"
#include "artforge/harness.hpp"
#include "artforge/stylize.hpp"
#include "support/forge_fixture.hpp"
#include "support/images.hpp"
#include "support/scenes.hpp"
#include "support/temp_dir.hpp"

using namespace artforge;
namespace at = artforge::testing;

namespace {

enum class Outcome { pass, fail, skip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

const std::vector<FeatureCodec>& both_codecs() {
  static const std::vector<FeatureCodec> codecs = {FeatureCodec::identity(), FeatureCodec::gaussian_pyramid(3)};
  return codecs;
}

std::pair<PixelImage, PixelImage> random_pair(DeterministicRng& rng) {
  auto dim = [&] { return 8 + rng.uniform_below(57); };
  PixelImage c = at::random_image(rng, dim(), dim());
  PixelImage s = at::random_image(rng, dim(), dim());
  return {std::move(c), std::move(s)};
}

// The spec'd tolerance applies to the statistics themselves; the default eps
// shrinks the output std by a known factor, checked separately against the
// closed form var(out) = (v_s + eps) v_c / (v_c + eps).
Verdict adain_statistics() {
  constexpr double kTinyEps = 1e-12;
  DeterministicRng rng(0xada1);
  double worst_mean = 0, worst_std = 0, worst_default_raw = 0, worst_closed_form = 0;
  for (int pair = 0; pair < 200; ++pair) {
    const auto [content, style] = random_pair(rng);
    for (const auto& codec : both_codecs()) {
      const auto f = stylize_features(content, style, codec, {1.0, kTinyEps});
      for (std::size_t l = 0; l < f.blended.size(); ++l) {
        const auto got = channel_stats(f.blended[l], kTinyEps);
        const auto want = channel_stats(f.style[l], kTinyEps);
        for (std::size_t c = 0; c < got.channels(); ++c) {
          worst_mean = std::max(worst_mean, std::abs(got.mean[c] - want.mean[c]));
          worst_std = std::max(worst_std, std::abs(got.std[c] - want.std[c]));
        }
      }
      const auto d = stylize_features(content, style, codec, {1.0, kDefaultEps});
      for (std::size_t l = 0; l < d.blended.size(); ++l) {
        const auto got = channel_stats(d.blended[l], kDefaultEps);
        const auto want = channel_stats(d.style[l], kDefaultEps);
        const auto vc = channel_stats(d.content[l], 0.0), vs = channel_stats(d.style[l], 0.0);
        for (std::size_t c = 0; c < got.channels(); ++c) {
          const double v_c = vc.std[c] * vc.std[c], v_s = vs.std[c] * vs.std[c];
          const double predicted = std::sqrt((v_s + kDefaultEps) * v_c / (v_c + kDefaultEps) + kDefaultEps);
          worst_default_raw = std::max(worst_default_raw, std::abs(got.std[c] - want.std[c]));
          worst_closed_form = std::max(worst_closed_form, std::abs(got.std[c] - predicted));
        }
      }
    }
  }
  return verdict(worst_mean <= 1e-5 && worst_std <= 1e-5 && worst_closed_form <= 1e-9,
                 fmt::format("200 pairs x 2 codecs, eps={}: max |d mean|={:.3g}, max |d std|={:.3g}; eps={}: max "
                             "|d std| vs style={:.3g}, vs closed-form eps effect={:.3g}",
                             kTinyEps, worst_mean, worst_std, kDefaultEps, worst_default_raw, worst_closed_form));
}

Verdict neutrality() {
  DeterministicRng rng(0x0e07);
  double worst_alpha0 = 0, worst_roundtrip = 0;
  for (int pair = 0; pair < 200; ++pair) {
    const auto [content, style] = random_pair(rng);
    for (const auto& codec : both_codecs()) {
      worst_alpha0 = std::max(worst_alpha0, max_abs_diff(stylize(content, style, codec, {0.0, kDefaultEps}).values(),
                                                         content.values()));
      worst_roundtrip = std::max(
          worst_roundtrip, max_abs_diff(codec.decode(codec.encode(content.tensor())).values(), content.values()));
    }
  }
  return verdict(worst_alpha0 <= 1e-6 && worst_roundtrip <= 1e-6,
                 fmt::format("alpha=0 max dev {:.3g}, codec round-trip max dev {:.3g}", worst_alpha0, worst_roundtrip));
}

Verdict oracle_equivalence() {
  DeterministicRng rng(0x0dac1e);
  double worst = 0;
  std::size_t mismatched_definedness = 0, crowd_scenes = 0, undefined_cells = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto scene = at::random_scene(rng, 4, 5, 8);
    for (const auto& a : scene.gt.annotations())
      if (a.is_crowd) {
        ++crowd_scenes;
        break;
      }
    const ApReport r = evaluate(scene.gt, scene.dets);
    for (const auto& t : r.per_threshold) {
      const auto want = at::ref_ap(scene.ref, t.threshold, 100, 101);
      if (want.has_value() != t.ap.has_value()) {
        ++mismatched_definedness;
        continue;
      }
      if (!want) {
        ++undefined_cells;
        continue;
      }
      worst = std::max(worst, std::abs(*want - *t.ap));
    }
  }
  return verdict(worst <= 1e-12 && mismatched_definedness == 0,
                 fmt::format("1000 scenes ({} with crowd), max |d AP|={:.3g}, undefined cells {}, definedness "
                             "mismatches {}",
                             crowd_scenes, worst, undefined_cells, mismatched_definedness));
}

Verdict hand_ap() {
  const DatasetIndex gt({{1, "1.jpg", 100, 100}}, {{1, 1, kCocoPersonCategory, {0, 0, 10, 10}, false}},
                        {{kCocoPersonCategory, "person"}});
  const std::vector<Detection> dets = {{1, kCocoPersonCategory, {0, 0, 10, 6}, 0.9}};
  const ApReport r = evaluate(gt, dets);
  const bool ok = r.ap50 == 1.0 && r.ap75 == 0.0 && r.ap == 0.3;
  return verdict(ok, fmt::format("IoU 0.6 detection: ap50={} ap75={} ap={}", r.ap50.value_or(NAN),
                                 r.ap75.value_or(NAN), r.ap.value_or(NAN)));
}

Verdict schedule() {
  const TrainConfig cfg;
  const std::int64_t ipe = 14668;
  const std::vector<std::pair<int, double>> table = {{0, 0.005}, {4, 0.005},   {5, 0.001},
                                                     {9, 0.001}, {10, 0.0002}, {14, 0.0002}};
  bool ok = true;
  std::string got;
  for (const auto& [epoch, want] : table) {
    const double lr = lr_at(cfg, epoch * ipe + cfg.warmup_iters, ipe);
    ok = ok && std::abs(lr - want) <= 1e-15;
    got += fmt::format("{}{}:{}", got.empty() ? "" : " ", epoch, lr);
  }
  const auto s1 = early_stop_at({0.50, 0.60, 0.59, 0.58, 0.57}, 3);
  const auto s2 = early_stop_at({0.4, 0.4, 0.4, 0.4, 0.4}, 3);
  const auto s3 = early_stop_at({0.1, 0.2, 0.3, 0.4, 0.5}, 3);
  ok = ok && s1 == 5u && s2 == 4u && !s3;
  return verdict(ok, fmt::format("lr by epoch {}; early stop at {}/{}/{}", got, s1 ? std::to_string(*s1) : "none",
                                 s2 ? std::to_string(*s2) : "none", s3 ? std::to_string(*s3) : "none"));
}

Verdict sweep_plan() {
  const auto sizes = ntrain_sizes(58672);
  const std::vector<std::size_t> want = {1000, 2000, 4000, 8000, 16000, 32000, 58672};
  return verdict(sizes == want, fmt::format("ntrain_sizes(58672) = [{}], {} models", fmt::join(sizes, ", "),
                                            sizes.size()));
}

Verdict annotation_preservation() {
  at::TempDir dir("artforge_accept");
  const auto fx = at::make_forge_fixture(dir.path(), 50, 10, 0xf0e9e);
  std::map<std::size_t, std::map<std::string, std::string>> bytes;
  std::size_t violations = 0;
  for (std::size_t workers : {1u, 8u}) {
    ForgeConfig cfg;
    cfg.global_seed = 2024;
    cfg.content_root = fx.content_root;
    cfg.output_dir = dir / ("out_" + std::to_string(workers));
    cfg.workers = workers;
    const auto manifest = assign_styles(fx.dataset, fx.library, cfg.global_seed, cfg);
    const ForgeResult r = forge(fx.dataset, fx.library, manifest, cfg);
    const DatasetIndex reread = parse_dataset(write_dataset(r.dataset));
    violations += verify_forge(fx.dataset, reread, manifest, cfg.output_dir).violations.size();
    auto& b = bytes[workers];
    b["annotations.json"] = write_dataset(r.dataset);
    b["manifest.tsv"] = write_manifest(manifest);
    for (const auto& e : manifest.entries) b[e.output_file] = read_text_file(cfg.output_dir / e.output_file);
  }
  const bool identical = bytes[1] == bytes[8];
  return verdict(violations == 0 && identical && bytes[1].size() == 52,
                 fmt::format("50 images: {} violation(s); 1 vs 8 workers byte-identical: {}", violations,
                             identical ? "yes" : "no"));
}

Verdict coco_table2() {
  const char* path = std::getenv("ARTFORGE_COCO_TRAIN_ANNOTATIONS");
  if (path == nullptr || *path == '\0')
    return {Outcome::skip, "set ARTFORGE_COCO_TRAIN_ANNOTATIONS to instances_train2017.json to run"};
  const DatasetIndex ds = load_dataset(path);
  constexpr std::size_t kImages = 58672, kPeople = 239845;
  bool any = false;
  std::string detail;
  for (bool crowd_only : {false, true}) {
    const PositivityRule rule{kCocoPersonCategory, crowd_only};
    const DatasetStats s = dataset_stats(filter_person_positive(ds, rule), rule);
    const std::size_t non_crowd = s.n_people - s.n_people_crowd;
    const bool all = s.n_images == kImages && s.n_people == kPeople;
    const bool nc = s.n_images == kImages && non_crowd == kPeople;
    any = any || all || nc;
    detail += fmt::format("{}[{}: images {} (d {:+}), people {} (d {:+}), non-crowd people {} (d {:+})]",
                          detail.empty() ? "" : " ", crowd_only ? "crowd-inclusive" : "non-crowd", s.n_images,
                          static_cast<long long>(s.n_images) - static_cast<long long>(kImages), s.n_people,
                          static_cast<long long>(s.n_people) - static_cast<long long>(kPeople), non_crowd,
                          static_cast<long long>(non_crowd) - static_cast<long long>(kPeople));
  }
  return verdict(any, detail);
}

Verdict comparison() {
  const ComparisonTable t = comparison_table({{"StyleCOCO", summary_report(0.36, 0.68, 0.33)}}, people_art_baselines());
  std::vector<double> base;
  for (const auto& r : t.rows)
    if (!r.ours) base.push_back(*r.ap50);
  const std::string text = t.render_text();
  const bool ok = base == std::vector<double>{0.40, 0.58, 0.45, 0.58} && t.delta &&
                  std::abs(*t.delta - 0.10) < 1e-12 && text.find("= +0.10") != std::string::npos;
  return verdict(ok, fmt::format("baselines [{}], delta {:+.2f}", fmt::join(base, ", "), t.delta.value_or(NAN)));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"adain-statistics-matching", adain_statistics},
      {"stylization-neutrality", neutrality},
      {"evaluator-oracle-equivalence", oracle_equivalence},
      {"hand-derived-ap", hand_ap},
      {"schedule-and-early-stop", schedule},
      {"sweep-plan", sweep_plan},
      {"annotation-preservation", annotation_preservation},
      {"coco-person-filter-counts", coco_table2},
      {"comparison-table", comparison},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {Outcome::fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
    if (v.outcome == Outcome::fail) ++failures;
    std::cout << fmt::format("{} {} ({:.2f}s): {}", tag, name, secs, v.detail) << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
