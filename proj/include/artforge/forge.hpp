#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "artforge/annotations.hpp"
#include "artforge/codec.hpp"
#include "artforge/error.hpp"
#include "artforge/raster_io.hpp"
#include "artforge/stylize.hpp"

namespace artforge {

struct StyleEntry {
  std::string id;
  std::filesystem::path path;

  friend bool operator==(const StyleEntry&, const StyleEntry&) = default;
};

/// Ordered, non-empty set of style images with unique ids.
class StyleLibrary {
 public:
  explicit StyleLibrary(std::vector<StyleEntry> styles);

  /// Every .jpg/.jpeg/.png below `dir`, sorted by relative path; the id is the
  /// relative path with forward slashes.
  static StyleLibrary from_directory(const std::filesystem::path& dir);

  const std::vector<StyleEntry>& styles() const noexcept { return styles_; }
  std::size_t size() const noexcept { return styles_.size(); }
  const StyleEntry* find(std::string_view id) const;

 private:
  std::vector<StyleEntry> styles_;
};

struct ForgeConfig {
  std::uint64_t global_seed = 0;
  double alpha = 1.0;
  double eps = kDefaultEps;
  FeatureCodec codec = FeatureCodec::gaussian_pyramid(3);
  /// Directory the content file_name fields are relative to.
  std::filesystem::path content_root;
  /// Stylized files are written here under their manifest output_file.
  std::filesystem::path output_dir;
  ImageFormat format = ImageFormat::jpeg;
  int jpeg_quality = 95;
  std::size_t workers = 1;
  /// Largest tolerated fraction of failed entries.
  double failure_budget = 0.01;

  void validate() const;
};

struct ManifestEntry {
  std::int64_t content_image_id = 0;
  std::string style_id;
  std::string output_file;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Record of which style each content image received; sorted by image id.
struct ForgeManifest {
  std::uint64_t global_seed = 0;
  double alpha = 1.0;
  std::string codec = "gaussian_pyramid:3";
  std::string rng;
  std::vector<ManifestEntry> entries;

  friend bool operator==(const ForgeManifest&, const ForgeManifest&) = default;
};

/// One style per image, drawn with replacement from a stream keyed by
/// (seed, image id), so the result ignores iteration order. Output names swap
/// the content file's extension for the configured format.
ForgeManifest assign_styles(const DatasetIndex& ds, const StyleLibrary& lib, std::uint64_t global_seed,
                            const ForgeConfig& cfg = {});

std::string write_manifest(const ForgeManifest& manifest);
ForgeManifest parse_manifest(std::string_view text);

struct ForgeFailure {
  std::int64_t content_image_id = 0;
  std::string reason;
};

struct ForgeResult {
  /// Input dataset with file_name pointing at the stylized outputs; images that
  /// failed are left out.
  DatasetIndex dataset;
  std::vector<ForgeFailure> failures;
};

class ForgeError : public Error {
 public:
  ForgeError(const std::string& what, std::vector<ForgeFailure> failures)
      : Error(what), failures_(std::move(failures)) {}
  const std::vector<ForgeFailure>& failures() const noexcept { return failures_; }

 private:
  std::vector<ForgeFailure> failures_;
};

/// Stylizes every manifest entry on cfg.workers threads. Output bytes do not
/// depend on the worker count. Unreadable inputs are recorded per entry;
/// exceeding the failure budget throws ForgeError.
ForgeResult forge(const DatasetIndex& ds, const StyleLibrary& lib, const ForgeManifest& manifest,
                  const ForgeConfig& cfg);

struct Violation {
  enum class Kind { annotation, dimension, coverage, manifest };
  Kind kind;
  std::string message;
};

std::string_view to_string(Violation::Kind kind);

struct VerificationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks annotation preservation, image dimensions and manifest coverage.
/// With `images_dir`, output files must also exist and decode to the recorded size.
VerificationReport verify_forge(const DatasetIndex& original, const DatasetIndex& forged,
                                const ForgeManifest& manifest,
                                const std::optional<std::filesystem::path>& images_dir = std::nullopt);

}  // namespace artforge
