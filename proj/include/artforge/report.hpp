#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "artforge/eval.hpp"

namespace artforge {

/// "threshold,recall,precision" rows, one block per threshold in ascending order.
std::string pr_curves_csv(const ApReport& report);

/// Inverse of pr_curves_csv: (threshold, (recall, precision) points) per block.
std::vector<std::pair<double, std::vector<PrPoint>>> parse_pr_curves_csv(std::string_view text);

/// Structured summary: ap, ap50, ap75, per-threshold AP and ground-truth count.
/// Undefined values are written as null.
std::string summary_json(const ApReport& report);

/// One-line human summary, e.g. "AP=0.360 AP.50=0.680 AP.75=0.330".
std::string summary_line(const ApReport& report);

/// Line plot of the 0.50 and 0.75 curves.
std::string pr_curves_svg(const ApReport& report);

struct ExportedReport {
  std::filesystem::path csv;
  std::filesystem::path summary;
  std::filesystem::path svg;  // empty unless requested
};

/// Writes pr_curves.csv, summary.json and optionally pr_curves.svg into `dir`.
ExportedReport export_report(const ApReport& report, const std::filesystem::path& dir, bool with_svg = false);

}  // namespace artforge
