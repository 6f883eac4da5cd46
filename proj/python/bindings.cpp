#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "artforge/annotations.hpp"
#include "artforge/cli.hpp"
#include "artforge/coco_io.hpp"
#include "artforge/error.hpp"
#include "artforge/eval.hpp"
#include "artforge/forge.hpp"
#include "artforge/harness.hpp"
#include "artforge/stylize.hpp"

namespace py = pybind11;
using namespace artforge;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// HxWx3 array in [0, 1] to the channel-major image.
PixelImage to_image(const Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) throw py::value_error("expected an H x W x 3 array");
  const auto h = static_cast<std::size_t>(a.shape(0)), w = static_cast<std::size_t>(a.shape(1));
  std::vector<double> v(3 * h * w);
  const auto r = a.unchecked<3>();
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x)
        v[(c * h + y) * w + x] = r(static_cast<py::ssize_t>(y), static_cast<py::ssize_t>(x), static_cast<py::ssize_t>(c));
  return PixelImage(w, h, std::move(v));
}

Array from_image(const PixelImage& img) {
  const std::size_t h = img.height(), w = img.width();
  Array out({h, w, std::size_t{3}});
  auto m = out.mutable_unchecked<3>();
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x)
        m(static_cast<py::ssize_t>(y), static_cast<py::ssize_t>(x), static_cast<py::ssize_t>(c)) = img.at(c, y, x);
  return out;
}

py::object opt(const std::optional<double>& v) { return v ? py::object(py::float_(*v)) : py::object(py::none()); }

py::dict report_dict(const ApReport& r) {
  py::dict per;
  for (const auto& t : r.per_threshold) per[py::float_(t.threshold)] = opt(t.ap);
  py::dict d;
  d["ap"] = opt(r.ap);
  d["ap50"] = opt(r.ap50);
  d["ap75"] = opt(r.ap75);
  d["per_threshold"] = per;
  return d;
}

}  // namespace

PYBIND11_MODULE(_artforge, m) {
  m.doc() = "Art-styled detection datasets and COCO-protocol evaluation";
  m.attr("__version__") = kVersion;

  // Translators run newest first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<UndefinedMetric>(m, "UndefinedMetricError", PyExc_ArithmeticError);

  py::class_<DatasetStats>(m, "DatasetStats")
      .def_readonly("n_images", &DatasetStats::n_images)
      .def_readonly("n_positive", &DatasetStats::n_positive)
      .def_readonly("n_people", &DatasetStats::n_people)
      .def_readonly("n_people_crowd", &DatasetStats::n_people_crowd)
      .def("__repr__", [](const DatasetStats& s) {
        return "DatasetStats(n_images=" + std::to_string(s.n_images) + ", n_positive=" + std::to_string(s.n_positive) +
               ", n_people=" + std::to_string(s.n_people) + ", n_people_crowd=" + std::to_string(s.n_people_crowd) + ")";
      });

  m.def(
      "dataset_stats",
      [](const std::string& coco_json, bool include_crowd_only) {
        return dataset_stats(parse_dataset(coco_json), {kCocoPersonCategory, include_crowd_only});
      },
      py::arg("coco_json"), py::arg("include_crowd_only") = false, "Counts for a COCO instances document.");
  m.def(
      "filter_person_positive",
      [](const std::string& coco_json, bool include_crowd_only) {
        return write_dataset(filter_person_positive(parse_dataset(coco_json), {kCocoPersonCategory, include_crowd_only}));
      },
      py::arg("coco_json"), py::arg("include_crowd_only") = false);
  m.def(
      "subset_sample",
      [](const std::string& coco_json, std::size_t n, std::uint64_t seed) {
        return write_dataset(subset_sample(parse_dataset(coco_json), n, seed));
      },
      py::arg("coco_json"), py::arg("n"), py::arg("seed"));

  m.def(
      "iou",
      [](std::array<double, 4> a, std::array<double, 4> b) {
        return iou({a[0], a[1], a[2], a[3]}, {b[0], b[1], b[2], b[3]});
      },
      py::arg("a"), py::arg("b"), "IoU of two [x, y, w, h] boxes.");
  m.def(
      "evaluate",
      [](const std::string& gt_json, const std::string& dets_json, std::int64_t category, std::size_t max_dets) {
        EvalConfig cfg;
        cfg.category = category;
        cfg.max_dets_per_image = max_dets;
        return report_dict(evaluate(parse_dataset(gt_json), parse_detections(dets_json), cfg));
      },
      py::arg("gt_json"), py::arg("dets_json"), py::arg("category") = kCocoPersonCategory, py::arg("max_dets") = 100,
      "AP, AP.50, AP.75 and per-threshold AP; undefined values are None.");

  m.def(
      "channel_stats",
      [](const Array& image, double eps) {
        const ChannelStats s = channel_stats(to_image(image).tensor(), eps);
        return std::make_pair(s.mean, s.std);
      },
      py::arg("image"), py::arg("eps") = kDefaultEps, "Per-channel (mean, std) of an H x W x 3 image.");
  m.def(
      "stylize",
      [](const Array& content, const Array& style, const std::string& codec, double alpha, double eps) {
        return from_image(stylize(to_image(content), to_image(style), FeatureCodec::parse(codec), {alpha, eps}));
      },
      py::arg("content"), py::arg("style"), py::arg("codec") = "gaussian_pyramid:3", py::arg("alpha") = 1.0,
      py::arg("eps") = kDefaultEps);
  m.def(
      "assign_styles",
      [](const std::string& coco_json, const std::vector<std::string>& style_ids, std::uint64_t seed) {
        std::vector<StyleEntry> styles;
        for (const auto& id : style_ids) styles.push_back({id, id});
        const ForgeManifest manifest = assign_styles(parse_dataset(coco_json), StyleLibrary(std::move(styles)), seed);
        std::vector<std::pair<std::int64_t, std::string>> out;
        for (const auto& e : manifest.entries) out.emplace_back(e.content_image_id, e.style_id);
        return out;
      },
      py::arg("coco_json"), py::arg("style_ids"), py::arg("seed"), "(image id, style id) pairs sorted by image id.");

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("base_lr", &TrainConfig::base_lr)
      .def_readwrite("momentum", &TrainConfig::momentum)
      .def_readwrite("weight_decay", &TrainConfig::weight_decay)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("lr_step_epochs", &TrainConfig::lr_step_epochs)
      .def_readwrite("lr_gamma", &TrainConfig::lr_gamma)
      .def_readwrite("warmup_iters", &TrainConfig::warmup_iters)
      .def_readwrite("warmup_start_factor", &TrainConfig::warmup_start_factor)
      .def_readwrite("trainable_backbone_layers", &TrainConfig::trainable_backbone_layers)
      .def_readwrite("val_subset_size", &TrainConfig::val_subset_size)
      .def_readwrite("patience", &TrainConfig::patience)
      .def_readwrite("min_delta", &TrainConfig::min_delta)
      .def_readwrite("early_stop_metric", &TrainConfig::early_stop_metric)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def("validate", &TrainConfig::validate)
      .def(py::self == py::self);

  m.def("lr_at", &lr_at, py::arg("cfg"), py::arg("global_iter"), py::arg("iters_per_epoch"));
  m.def("early_stop_at", &early_stop_at, py::arg("series"), py::arg("patience"), py::arg("min_delta") = 0.0,
        "1-based evaluation index at which training stops, or None.");
  m.def("ntrain_sizes", &ntrain_sizes, py::arg("total_available"));
  m.def(
      "emit_train_config",
      [](const TrainConfig& cfg, const std::string& train_annotations, const std::string& train_images,
         const std::string& val_annotations, const std::string& val_images) {
        return emit_train_config(cfg, {train_annotations, train_images, val_annotations, val_images});
      },
      py::arg("cfg"), py::arg("train_annotations") = "", py::arg("train_images") = "", py::arg("val_annotations") = "",
      py::arg("val_images") = "");
  m.def(
      "parse_train_config",
      [](const std::string& text) {
        auto [cfg, p] = parse_train_config(text);
        py::dict paths;
        paths["train_annotations"] = p.train_annotations;
        paths["train_images"] = p.train_images;
        paths["val_annotations"] = p.val_annotations;
        paths["val_images"] = p.val_images;
        return py::make_tuple(cfg, paths);
      },
      py::arg("text"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the artforge tool in-process; returns (exit code, stdout, stderr).");
}
