#include "artforge/peopleart.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <spdlog/spdlog.h>

#include "artforge/error.hpp"

namespace artforge {

namespace {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

fs::path image_set_file(const fs::path& root, const std::string& split) {
  for (const std::string name : {split + ".txt", "person_" + split + ".txt"}) {
    const fs::path p = root / "ImageSets" / "Main" / name;
    if (fs::exists(p)) return p;
  }
  throw IoError("no image set for split '" + split + "' under " + (root / "ImageSets" / "Main").string());
}

fs::path annotation_file(const fs::path& root, const std::string& id) {
  const fs::path direct = root / "Annotations" / (id + ".xml");
  if (fs::exists(direct)) return direct;
  fs::path stem = fs::path(id);
  stem.replace_extension(".xml");
  const fs::path stripped = root / "Annotations" / stem;
  if (fs::exists(stripped)) return stripped;
  throw IoError("no annotation file for image '" + id + "'");
}

double coord(const pt::ptree& box, const char* key, const std::string& where) {
  const auto v = box.get_optional<double>(key);
  if (!v || !std::isfinite(*v)) throw SchemaError(where + "." + key, "missing or non-numeric");
  return *v;
}

}  // namespace

DatasetIndex VocXmlParser::parse(const fs::path& root, const std::string& split) const {
  std::ifstream list(image_set_file(root, split));
  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;
  std::size_t dropped = 0;
  std::string line;
  while (std::getline(list, line)) {
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id)) continue;

    const fs::path xml_path = annotation_file(root, id);
    pt::ptree tree;
    try {
      pt::read_xml(xml_path.string(), tree);
    } catch (const pt::xml_parser_error& e) {
      throw ParseError("malformed XML in " + xml_path.string() + ": " + e.message(), 0);
    }
    const pt::ptree& ann = tree.get_child("annotation", pt::ptree{});
    const std::string where = xml_path.filename().string();

    ImageRecord img;
    img.id = static_cast<std::int64_t>(images.size() + 1);
    const auto width = ann.get_optional<int>("size.width");
    const auto height = ann.get_optional<int>("size.height");
    if (!width || !height) throw SchemaError(where + ".size", "missing width/height");
    img.width = *width;
    img.height = *height;
    if (img.width <= 0 || img.height <= 0) throw ValidationError(where + ": non-positive image size");
    fs::path file = fs::path("JPEGImages") / id;
    if (!file.has_extension()) file += ".jpg";
    img.file_name = file.generic_string();
    img.extra["source_id"] = id;

    for (const auto& [tag, obj] : ann) {
      if (tag != "object") continue;
      if (obj.get<std::string>("name", "") != options_.class_name) continue;
      const auto box = obj.get_child_optional("bndbox");
      if (!box) throw SchemaError(where + ".object.bndbox", "missing");
      const double offset = options_.one_based ? 1.0 : 0.0;
      const double xmin = coord(*box, "xmin", where), ymin = coord(*box, "ymin", where);
      const double xmax = coord(*box, "xmax", where), ymax = coord(*box, "ymax", where);
      Annotation a;
      a.id = static_cast<std::int64_t>(annotations.size() + 1);
      a.image_id = img.id;
      a.category_id = kCocoPersonCategory;
      a.bbox = {std::max(0.0, xmin - offset), std::max(0.0, ymin - offset), xmax - xmin + offset, ymax - ymin + offset};
      a.is_crowd = options_.difficult_as_crowd && obj.get<int>("difficult", 0) == 1;
      if (a.bbox.degenerate()) {
        ++dropped;
        continue;
      }
      a.extra["area"] = a.bbox.area();
      annotations.push_back(std::move(a));
    }
    images.push_back(std::move(img));
  }
  if (dropped > 0) spdlog::warn("dropped {} degenerate People-Art box(es)", dropped);
  Category person{kCocoPersonCategory, "person", Json::object({{"supercategory", "person"}})};
  return DatasetIndex(std::move(images), std::move(annotations), {person});
}

std::unique_ptr<PeopleArtParser> make_peopleart_parser(const std::string& name, const VocParserOptions& options) {
  if (name == "voc") return std::make_unique<VocXmlParser>(options);
  throw ValidationError("unknown People-Art parser '" + name + "'");
}

}  // namespace artforge
