#include "artforge/forge.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "artforge/parallel.hpp"
#include "artforge/rng.hpp"

namespace artforge {

StyleLibrary::StyleLibrary(std::vector<StyleEntry> styles) : styles_(std::move(styles)) {
  if (styles_.empty()) throw ValidationError("style library is empty");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < styles_.size(); ++i) {
    if (!ids.insert(styles_[i].id).second) throw ValidationError("duplicate style id '" + styles_[i].id + "'", {i});
    if (styles_[i].id.find_first_of("\t\n") != std::string::npos)
      throw ValidationError("style id contains a tab or newline", {i});
  }
}

StyleLibrary StyleLibrary::from_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("style directory not found: " + dir.string());
  std::vector<StyleEntry> styles;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext != ".jpg" && ext != ".jpeg" && ext != ".png") continue;
    styles.push_back({fs::relative(e.path(), dir).generic_string(), e.path()});
  }
  std::sort(styles.begin(), styles.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return StyleLibrary(std::move(styles));
}

const StyleEntry* StyleLibrary::find(std::string_view id) const {
  for (const auto& s : styles_)
    if (s.id == id) return &s;
  return nullptr;
}

void ForgeConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  if (jpeg_quality < 1 || jpeg_quality > 100) throw ValidationError("JPEG quality must lie in [1, 100]");
  if (!(failure_budget >= 0.0 && failure_budget <= 1.0)) throw ValidationError("failure budget must lie in [0, 1]");
}

ForgeManifest assign_styles(const DatasetIndex& ds, const StyleLibrary& lib, std::uint64_t global_seed,
                            const ForgeConfig& cfg) {
  cfg.validate();
  ForgeManifest m;
  m.global_seed = global_seed;
  m.alpha = cfg.alpha;
  m.codec = cfg.codec.descriptor();
  m.rng = std::string(kRngName);

  std::vector<const ImageRecord*> images;
  for (const auto& img : ds.images()) images.push_back(&img);
  std::sort(images.begin(), images.end(), [](const auto* a, const auto* b) { return a->id < b->id; });

  std::set<std::string> outputs;
  for (const ImageRecord* img : images) {
    DeterministicRng rng(derive_seed(global_seed, static_cast<std::uint64_t>(img->id)));
    const auto& style = lib.styles()[rng.uniform_below(lib.size())];
    std::filesystem::path out = std::filesystem::path(img->file_name).lexically_normal();
    out.replace_extension(extension_for(cfg.format));
    std::string name = out.generic_string();
    if (name.empty() || name.starts_with("..") || out.is_absolute() || name.find_first_of("\t\n") != std::string::npos)
      throw ValidationError(fmt::format("image {} has an unusable file_name '{}'", img->id, img->file_name));
    if (!outputs.insert(name).second)
      throw ValidationError(fmt::format("two images map to the output file '{}'", name));
    m.entries.push_back({img->id, style.id, std::move(name)});
  }
  return m;
}

namespace {

constexpr std::string_view kManifestMagic = "# artforge forge manifest v1";
constexpr std::string_view kColumns = "content_image_id\tstyle_id\toutput_file";

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

template <typename T>
T number(std::string_view s, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(fmt::format("bad number '{}' on manifest line {}", s, line), 0);
  return v;
}

}  // namespace

std::string write_manifest(const ForgeManifest& m) {
  std::string out = fmt::format("{}\n# seed={}\n# alpha={}\n# codec={}\n# rng={}\n{}\n", kManifestMagic,
                                m.global_seed, m.alpha, m.codec, m.rng, kColumns);
  for (const auto& e : m.entries) out += fmt::format("{}\t{}\t{}\n", e.content_image_id, e.style_id, e.output_file);
  return out;
}

ForgeManifest parse_manifest(std::string_view text) {
  ForgeManifest m;
  std::size_t offset = 0, line_no = 0;
  bool saw_magic = false, saw_columns = false;
  std::set<std::string> seen_keys;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    const std::size_t line_offset = offset;
    offset = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kManifestMagic) throw ParseError("not a forge manifest", 0);
      saw_magic = true;
      continue;
    }
    if (line.empty()) continue;
    if (!saw_columns && line.starts_with("# ")) {
      const auto kv = line.substr(2);
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos) throw ParseError("malformed manifest header line", line_offset);
      const std::string key(kv.substr(0, eq));
      const auto value = kv.substr(eq + 1);
      if (!seen_keys.insert(key).second) throw ParseError("duplicate manifest header '" + key + "'", line_offset);
      if (key == "seed") m.global_seed = number<std::uint64_t>(value, line_no);
      else if (key == "alpha") m.alpha = number<double>(value, line_no);
      else if (key == "codec") m.codec = std::string(value);
      else if (key == "rng") m.rng = std::string(value);
      else throw ParseError("unknown manifest header '" + key + "'", line_offset);
      continue;
    }
    if (!saw_columns) {
      if (line != kColumns) throw ParseError("expected manifest column header", line_offset);
      saw_columns = true;
      continue;
    }
    const auto cols = split(line, '\t');
    if (cols.size() != 3) throw ParseError(fmt::format("manifest line {} must have 3 columns", line_no), line_offset);
    m.entries.push_back({number<std::int64_t>(cols[0], line_no), std::string(cols[1]), std::string(cols[2])});
  }
  if (!saw_magic || !saw_columns) throw ParseError("truncated manifest", text.size());
  for (const char* key : {"seed", "alpha", "codec"})
    if (!seen_keys.contains(key)) throw SchemaError(std::string("manifest.") + key, "missing header");
  return m;
}

ForgeResult forge(const DatasetIndex& ds, const StyleLibrary& lib, const ForgeManifest& manifest,
                  const ForgeConfig& cfg) {
  cfg.validate();
  if (manifest.entries.size() != ds.n_images())
    throw ValidationError(fmt::format("manifest has {} entries for {} images", manifest.entries.size(), ds.n_images()));
  std::set<std::int64_t> covered;
  for (const auto& e : manifest.entries) {
    if (ds.find_image(e.content_image_id) == nullptr)
      throw ValidationError(fmt::format("manifest refers to unknown image {}", e.content_image_id));
    if (!covered.insert(e.content_image_id).second)
      throw ValidationError(fmt::format("manifest lists image {} twice", e.content_image_id));
    if (lib.find(e.style_id) == nullptr) throw ValidationError("manifest refers to unknown style '" + e.style_id + "'");
  }

  std::filesystem::create_directories(cfg.output_dir);
  const StyleSpec spec{cfg.alpha, cfg.eps};
  std::vector<std::optional<std::string>> errors(manifest.entries.size());

  parallel_for(manifest.entries.size(), cfg.workers, [&](std::size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    const ImageRecord& img = *ds.find_image(e.content_image_id);
    try {
      const PixelImage content = read_image(cfg.content_root / img.file_name);
      if (content.width() != static_cast<std::size_t>(img.width) ||
          content.height() != static_cast<std::size_t>(img.height))
        throw ValidationError(fmt::format("decoded size {}x{} differs from recorded {}x{}", content.width(),
                                          content.height(), img.width, img.height));
      const PixelImage style = read_image(lib.find(e.style_id)->path);
      const PixelImage out = stylize(content, style, cfg.codec, spec);
      write_image(cfg.output_dir / e.output_file, out, cfg.format, cfg.jpeg_quality);
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });

  ForgeResult result;
  std::map<std::int64_t, std::string> renamed;
  std::vector<std::int64_t> kept;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    if (errors[i]) {
      spdlog::warn("forge: image {} failed: {}", e.content_image_id, *errors[i]);
      result.failures.push_back({e.content_image_id, *errors[i]});
      continue;
    }
    renamed[e.content_image_id] = e.output_file;
    kept.push_back(e.content_image_id);
  }
  const double failed = static_cast<double>(result.failures.size());
  if (!manifest.entries.empty() && failed > cfg.failure_budget * static_cast<double>(manifest.entries.size()))
    throw ForgeError(fmt::format("{} of {} entries failed, above the {:.1f}% budget", result.failures.size(),
                                 manifest.entries.size(), 100.0 * cfg.failure_budget),
                     result.failures);

  const DatasetIndex kept_ds = result.failures.empty() ? ds : restrict_images(ds, kept);
  result.dataset = with_file_names(kept_ds, [&](const ImageRecord& img) { return renamed.at(img.id); });
  return result;
}

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::annotation: return "annotation";
    case Violation::Kind::dimension: return "dimension";
    case Violation::Kind::coverage: return "coverage";
    case Violation::Kind::manifest: return "manifest";
  }
  return "unknown";
}

VerificationReport verify_forge(const DatasetIndex& original, const DatasetIndex& forged,
                                const ForgeManifest& manifest,
                                const std::optional<std::filesystem::path>& images_dir) {
  using Kind = Violation::Kind;
  VerificationReport report;
  auto flag = [&](Kind kind, std::string msg) { report.violations.push_back({kind, std::move(msg)}); };

  std::map<std::int64_t, const ManifestEntry*> entries;
  for (const auto& e : manifest.entries) {
    if (!entries.emplace(e.content_image_id, &e).second)
      flag(Kind::manifest, fmt::format("image {} has more than one manifest entry", e.content_image_id));
    if (original.find_image(e.content_image_id) == nullptr)
      flag(Kind::manifest, fmt::format("manifest entry for unknown image {}", e.content_image_id));
  }

  for (const auto& img : original.images()) {
    const ImageRecord* out = forged.find_image(img.id);
    if (!entries.contains(img.id)) flag(Kind::coverage, fmt::format("image {} has no manifest entry", img.id));
    if (out == nullptr) {
      flag(Kind::coverage, fmt::format("image {} missing from forged dataset", img.id));
      continue;
    }
    if (out->width != img.width || out->height != img.height)
      flag(Kind::dimension, fmt::format("image {} recorded as {}x{}, originally {}x{}", img.id, out->width,
                                        out->height, img.width, img.height));
    if (auto it = entries.find(img.id); it != entries.end() && it->second->output_file != out->file_name)
      flag(Kind::manifest, fmt::format("image {} file_name '{}' differs from manifest output '{}'", img.id,
                                       out->file_name, it->second->output_file));
  }
  for (const auto& img : forged.images())
    if (original.find_image(img.id) == nullptr)
      flag(Kind::coverage, fmt::format("forged dataset has extra image {}", img.id));

  std::map<std::int64_t, const Annotation*> forged_anns;
  for (const auto& a : forged.annotations()) forged_anns.emplace(a.id, &a);
  for (const auto& a : original.annotations()) {
    auto it = forged_anns.find(a.id);
    if (it == forged_anns.end()) {
      flag(Kind::annotation, fmt::format("annotation {} missing from forged dataset", a.id));
      continue;
    }
    const Annotation& b = *it->second;
    if (b.image_id != a.image_id || b.category_id != a.category_id || b.is_crowd != a.is_crowd || !(b.bbox == a.bbox))
      flag(Kind::annotation, fmt::format("annotation {} changed: image {}->{}, category {}->{}, bbox [{}, {}, {}, {}]"
                                         "->[{}, {}, {}, {}]",
                                         a.id, a.image_id, b.image_id, a.category_id, b.category_id, a.bbox.x,
                                         a.bbox.y, a.bbox.w, a.bbox.h, b.bbox.x, b.bbox.y, b.bbox.w, b.bbox.h));
    forged_anns.erase(it);
  }
  for (const auto& [id, a] : forged_anns) flag(Kind::annotation, fmt::format("forged dataset has extra annotation {}", id));
  if (!(original.categories() == forged.categories())) flag(Kind::annotation, "category list changed");

  if (images_dir) {
    for (const auto& img : forged.images()) {
      const auto path = *images_dir / img.file_name;
      if (!std::filesystem::exists(path)) {
        flag(Kind::coverage, fmt::format("output file missing for image {}: {}", img.id, path.string()));
        continue;
      }
      try {
        const PixelImage px = read_image(path);
        if (px.width() != static_cast<std::size_t>(img.width) || px.height() != static_cast<std::size_t>(img.height))
          flag(Kind::dimension, fmt::format("output for image {} decodes to {}x{}, expected {}x{}", img.id,
                                            px.width(), px.height(), img.width, img.height));
      } catch (const std::exception& ex) {
        flag(Kind::coverage, fmt::format("output for image {} unreadable: {}", img.id, ex.what()));
      }
    }
  }
  return report;
}

}  // namespace artforge
