#include "artforge/coco_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "artforge/error.hpp"

namespace artforge {

namespace {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("malformed JSON: " + std::string(e.what()), e.byte);
  }
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + "." + key, "missing required field");
  return *it;
}

std::int64_t as_int(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  throw SchemaError(where, "expected an integer");
}

double as_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(where, "expected a finite number");
  return d;
}

std::string as_string(const Json& v, const std::string& where) {
  if (!v.is_string()) throw SchemaError(where, "expected a string");
  return v.get<std::string>();
}

const Json& as_array(const Json& v, const std::string& where) {
  if (!v.is_array()) throw SchemaError(where, "expected an array");
  return v;
}

BoundingBox as_bbox(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) throw SchemaError(where, "expected [x, y, w, h]");
  return BoundingBox{as_number(v[0], where + "[0]"), as_number(v[1], where + "[1]"),
                     as_number(v[2], where + "[2]"), as_number(v[3], where + "[3]")};
}

Json bbox_json(const BoundingBox& b) { return Json::array({b.x, b.y, b.w, b.h}); }

bool as_crowd(const Json& obj, const std::string& where) {
  auto it = obj.find("iscrowd");
  if (it == obj.end()) return false;
  if (it->is_boolean()) return it->get<bool>();
  const std::int64_t v = as_int(*it, where + ".iscrowd");
  if (v != 0 && v != 1) throw SchemaError(where + ".iscrowd", "expected 0 or 1");
  return v == 1;
}

Json without(const Json& obj, std::initializer_list<const char*> keys) {
  Json rest = obj;
  for (const char* k : keys) rest.erase(k);
  return rest;
}

}  // namespace

DatasetIndex parse_dataset(std::string_view text, ParseStats* stats) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw SchemaError("$", "expected a top-level object");

  std::vector<ImageRecord> images;
  const Json& jimages = as_array(member(doc, "images", "$"), "$.images");
  images.reserve(jimages.size());
  for (std::size_t i = 0; i < jimages.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    const Json& j = jimages[i];
    ImageRecord img;
    img.id = as_int(member(j, "id", where), where + ".id");
    img.file_name = as_string(member(j, "file_name", where), where + ".file_name");
    img.width = static_cast<int>(as_int(member(j, "width", where), where + ".width"));
    img.height = static_cast<int>(as_int(member(j, "height", where), where + ".height"));
    if (img.width <= 0 || img.height <= 0)
      throw ValidationError(where + ": image dimensions must be positive", {i});
    img.extra = without(j, {"id", "file_name", "width", "height"});
    images.push_back(std::move(img));
  }

  std::vector<Category> categories;
  const Json& jcats = as_array(member(doc, "categories", "$"), "$.categories");
  for (std::size_t i = 0; i < jcats.size(); ++i) {
    const std::string where = "categories[" + std::to_string(i) + "]";
    const Json& j = jcats[i];
    Category c;
    c.id = as_int(member(j, "id", where), where + ".id");
    c.name = as_string(member(j, "name", where), where + ".name");
    c.extra = without(j, {"id", "name"});
    categories.push_back(std::move(c));
  }

  std::vector<Annotation> annotations;
  std::size_t dropped = 0;
  const Json& janns = as_array(member(doc, "annotations", "$"), "$.annotations");
  annotations.reserve(janns.size());
  for (std::size_t i = 0; i < janns.size(); ++i) {
    const std::string where = "annotations[" + std::to_string(i) + "]";
    const Json& j = janns[i];
    Annotation a;
    a.id = as_int(member(j, "id", where), where + ".id");
    a.image_id = as_int(member(j, "image_id", where), where + ".image_id");
    a.category_id = as_int(member(j, "category_id", where), where + ".category_id");
    a.bbox = as_bbox(member(j, "bbox", where), where + ".bbox");
    a.is_crowd = as_crowd(j, where);
    if (a.bbox.degenerate()) {
      ++dropped;
      continue;
    }
    a.extra = without(j, {"id", "image_id", "category_id", "bbox", "iscrowd"});
    annotations.push_back(std::move(a));
  }
  if (dropped > 0) spdlog::warn("dropped {} annotation(s) with non-positive width or height", dropped);
  if (stats) stats->dropped_degenerate = dropped;

  return DatasetIndex(std::move(images), std::move(annotations), std::move(categories),
                      without(doc, {"images", "annotations", "categories"}));
}

std::string write_dataset(const DatasetIndex& ds) {
  Json doc = ds.extra();
  Json images = Json::array();
  for (const auto& img : ds.images()) {
    Json j = img.extra;
    j["id"] = img.id;
    j["file_name"] = img.file_name;
    j["width"] = img.width;
    j["height"] = img.height;
    images.push_back(std::move(j));
  }
  Json annotations = Json::array();
  for (const auto& a : ds.annotations()) {
    Json j = a.extra;
    j["id"] = a.id;
    j["image_id"] = a.image_id;
    j["category_id"] = a.category_id;
    j["bbox"] = bbox_json(a.bbox);
    j["iscrowd"] = a.is_crowd ? 1 : 0;
    annotations.push_back(std::move(j));
  }
  Json categories = Json::array();
  for (const auto& c : ds.categories()) {
    Json j = c.extra;
    j["id"] = c.id;
    j["name"] = c.name;
    categories.push_back(std::move(j));
  }
  doc["images"] = std::move(images);
  doc["annotations"] = std::move(annotations);
  doc["categories"] = std::move(categories);
  return doc.dump();
}

std::vector<Detection> parse_detections(std::string_view text) {
  const Json doc = parse_json(text);
  const Json& arr = as_array(doc, "$");
  std::vector<Detection> dets;
  dets.reserve(arr.size());
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "[" + std::to_string(i) + "]";
    const Json& j = arr[i];
    Detection d;
    d.image_id = as_int(member(j, "image_id", where), where + ".image_id");
    d.category_id = as_int(member(j, "category_id", where), where + ".category_id");
    d.bbox = as_bbox(member(j, "bbox", where), where + ".bbox");
    d.score = as_number(member(j, "score", where), where + ".score");
    if (d.score < 0.0 || d.score > 1.0 || d.bbox.degenerate()) bad.push_back(i);
    dets.push_back(d);
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << bad.size() << " detection(s) with score outside [0,1] or degenerate box at indices";
    for (std::size_t k = 0; k < bad.size() && k < 20; ++k) msg << ' ' << bad[k];
    if (bad.size() > 20) msg << " ...";
    throw ValidationError(msg.str(), std::move(bad));
  }
  return dets;
}

std::string write_detections(const std::vector<Detection>& dets) {
  Json arr = Json::array();
  for (const auto& d : dets) {
    arr.push_back({{"image_id", d.image_id},
                   {"category_id", d.category_id},
                   {"bbox", bbox_json(d.bbox)},
                   {"score", d.score}});
  }
  return arr.dump();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return std::move(buf).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace artforge
