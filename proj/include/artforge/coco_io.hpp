#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "artforge/annotations.hpp"

namespace artforge {

struct ParseStats {
  /// Annotations dropped because w <= 0 or h <= 0.
  std::size_t dropped_degenerate = 0;
};

/// Parses a COCO instances document.
///
/// Throws ParseError (with byte offset) on malformed JSON, SchemaError naming
/// the field when a required member is missing or mistyped, ValidationError on
/// dangling references or duplicate ids. Degenerate boxes are dropped and counted.
DatasetIndex parse_dataset(std::string_view text, ParseStats* stats = nullptr);

/// Serializes to a COCO instances document. Preserved members (segmentation,
/// area, info, licenses, ...) are written back verbatim.
std::string write_dataset(const DatasetIndex& ds);

/// Parses a COCO results array. Throws ValidationError listing the indices of
/// entries whose score is outside [0, 1] or whose box is degenerate.
std::vector<Detection> parse_detections(std::string_view text);

std::string write_detections(const std::vector<Detection>& dets);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

inline DatasetIndex load_dataset(const std::filesystem::path& path, ParseStats* stats = nullptr) {
  return parse_dataset(read_text_file(path), stats);
}

inline std::vector<Detection> load_detections(const std::filesystem::path& path) {
  return parse_detections(read_text_file(path));
}

}  // namespace artforge
