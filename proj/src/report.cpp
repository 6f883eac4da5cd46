#include "artforge/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "artforge/annotations.hpp"
#include "artforge/coco_io.hpp"
#include "artforge/error.hpp"

namespace artforge {

namespace {

Json maybe(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string fixed3(const std::optional<double>& v) { return v ? fmt::format("{:.3f}", *v) : "undefined"; }

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("bad number '" + std::string(s) + "' on line " + std::to_string(line), 0);
  return v;
}

}  // namespace

std::string pr_curves_csv(const ApReport& report) {
  std::string out = "threshold,recall,precision\n";
  for (const auto& t : report.per_threshold)
    for (const auto& p : t.curve.points) out += fmt::format("{},{},{}\n", t.threshold, p.recall, p.precision);
  return out;
}

std::vector<std::pair<double, std::vector<PrPoint>>> parse_pr_curves_csv(std::string_view text) {
  std::vector<std::pair<double, std::vector<PrPoint>>> blocks;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    offset = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "threshold,recall,precision") throw ParseError("unexpected CSV header", 0);
      continue;
    }
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw ParseError("expected three columns on line " + std::to_string(line_no), offset);
    const double t = parse_double(line.substr(0, c1), line_no);
    PrPoint p;
    p.recall = parse_double(line.substr(c1 + 1, c2 - c1 - 1), line_no);
    p.precision = parse_double(line.substr(c2 + 1), line_no);
    if (blocks.empty() || blocks.back().first != t) blocks.emplace_back(t, std::vector<PrPoint>{});
    blocks.back().second.push_back(p);
  }
  return blocks;
}

std::string summary_json(const ApReport& report) {
  Json per = Json::array();
  std::size_t n_gt = 0;
  for (const auto& t : report.per_threshold) {
    per.push_back({{"threshold", t.threshold}, {"ap", maybe(t.ap)}, {"n_detections", t.curve.points.size()}});
    n_gt = t.curve.n_gt;
  }
  Json doc = {{"ap", maybe(report.ap)},
              {"ap50", maybe(report.ap50)},
              {"ap75", maybe(report.ap75)},
              {"n_gt", n_gt},
              {"per_threshold", std::move(per)}};
  return doc.dump(2) + "\n";
}

std::string summary_line(const ApReport& report) {
  return fmt::format("AP={} AP.50={} AP.75={}", fixed3(report.ap), fixed3(report.ap50), fixed3(report.ap75));
}

std::string pr_curves_svg(const ApReport& report) {
  constexpr double kSize = 400.0, kMargin = 40.0;
  std::ostringstream svg;
  svg << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">)",
                     kSize + 2 * kMargin)
      << '\n';
  svg << fmt::format(R"(<rect x="{0}" y="{0}" width="{1}" height="{1}" fill="none" stroke="black"/>)", kMargin, kSize)
      << '\n';
  svg << fmt::format(R"(<text x="{}" y="{}" font-size="12" text-anchor="middle">recall</text>)", kMargin + kSize / 2,
                     kSize + 1.75 * kMargin)
      << '\n';
  svg << fmt::format(R"svg(<text x="12" y="{}" font-size="12" transform="rotate(-90 12 {})">precision</text>)svg",
                     kMargin + kSize / 2, kMargin + kSize / 2)
      << '\n';
  const std::pair<double, const char*> series[] = {{0.50, "#1f77b4"}, {0.75, "#ff7f0e"}};
  double legend_y = kMargin + 16;
  for (const auto& [threshold, color] : series) {
    const ThresholdResult* t = report.at(threshold);
    if (t == nullptr || t->curve.points.empty()) continue;
    svg << R"(<polyline fill="none" stroke=")" << color << R"(" stroke-width="1.5" points=")";
    for (const auto& p : t->curve.points)
      svg << fmt::format("{:.2f},{:.2f} ", kMargin + p.recall * kSize, kMargin + (1.0 - p.precision) * kSize);
    svg << "\"/>\n";
    svg << fmt::format(R"(<text x="{}" y="{}" font-size="12" fill="{}">IoU {:.2f} (AP {})</text>)",
                       kMargin + kSize - 130, legend_y, color, threshold, fixed3(t->ap))
        << '\n';
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

ExportedReport export_report(const ApReport& report, const std::filesystem::path& dir, bool with_svg) {
  ExportedReport out{dir / "pr_curves.csv", dir / "summary.json", {}};
  write_text_file(out.csv, pr_curves_csv(report));
  write_text_file(out.summary, summary_json(report));
  if (with_svg) {
    out.svg = dir / "pr_curves.svg";
    write_text_file(out.svg, pr_curves_svg(report));
  }
  return out;
}

}  // namespace artforge
