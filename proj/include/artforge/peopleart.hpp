#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "artforge/annotations.hpp"

namespace artforge {

/// Reads a People-Art split in one native layout and returns it as a COCO-style
/// index with a single "person" category (id 1).
class PeopleArtParser {
 public:
  virtual ~PeopleArtParser() = default;
  virtual std::string name() const = 0;
  virtual DatasetIndex parse(const std::filesystem::path& root, const std::string& split) const = 0;
};

struct VocParserOptions {
  /// Map VOC "difficult" objects to crowd regions so they are ignored in scoring.
  bool difficult_as_crowd = false;
  /// VOC pixel coordinates are 1-based and inclusive.
  bool one_based = true;
  std::string class_name = "person";
};

/// PASCAL VOC layout:
///   ImageSets/Main/<split>.txt or person_<split>.txt   one image id per line, optional label column
///   Annotations/<id>.xml                               size + object/bndbox entries
///   JPEGImages/<id>[.jpg]                              image files
/// Image ids may contain subdirectories. Images and annotations are numbered
/// from 1 in image-set order.
class VocXmlParser final : public PeopleArtParser {
 public:
  explicit VocXmlParser(VocParserOptions options = {}) : options_(std::move(options)) {}
  std::string name() const override { return "voc"; }
  DatasetIndex parse(const std::filesystem::path& root, const std::string& split) const override;

 private:
  VocParserOptions options_;
};

/// Parser registry; currently "voc". Throws ValidationError for unknown names.
std::unique_ptr<PeopleArtParser> make_peopleart_parser(const std::string& name, const VocParserOptions& options = {});

}  // namespace artforge
