#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "iqa/metrics.hpp"
#include "iqa/stats.hpp"

namespace iqa::bench {

inline constexpr std::array<std::string_view, 6> kSubtypes = {
    "traditional", "denoising", "sr_traditional", "sr_psnr", "sr_gan", "mixture"};

struct ManifestRow {
  std::filesystem::path ref_path;
  std::filesystem::path dist_path;
  double mos = 0.0;
  std::string distortion_type;
  std::string subtype;
  /// Precomputed objective scores keyed by metric name (from `score:<metric>`
  /// columns; empty cells are absent).
  std::map<std::string, double> scores;
};

struct Manifest {
  std::vector<ManifestRow> rows;
  std::vector<std::string> score_columns;  // metric names with a score:<metric> column
};

/// CSV with header `ref_path,dist_path,mos,distortion_type,subtype[,score:<metric>...]`.
/// Relative image paths resolve against `base_dir`. Throws ArgumentError on
/// malformed input, naming the line.
Manifest parse_manifest(std::string_view csv, const std::filesystem::path& base_dir = {});
Manifest load_manifest(const std::filesystem::path& path);

enum class GroupBy { subtype, distortion_type, all };
GroupBy parse_group_by(std::string_view s);
std::string_view group_by_name(GroupBy g);

struct Cell {
  std::string metric;
  std::string group;
  std::size_t n = 0;
  std::optional<double> srcc;
  std::optional<double> krcc;
  std::optional<double> plcc;  // omitted when n < 5 or the fit fails
  std::optional<std::array<double, 4>> coeffs;
  std::optional<stats::SaturationReport> saturation;
  std::string note;  // why a statistic is missing, if it is
};

struct RowError {
  std::size_t row = 0;  // zero-based data row
  std::string metric;
  std::string message;
};

struct CorrelationReport {
  GroupBy group_by = GroupBy::subtype;
  std::vector<std::string> metrics;
  std::vector<std::string> groups;
  std::vector<Cell> cells;  // metric-major, groups in `groups` order
  std::vector<RowError> errors;

  const Cell* find(std::string_view metric, std::string_view group) const;
};

struct BenchmarkOptions {
  MetricOptions metric;
  stats::SaturationOptions saturation;
};

/// Metrics named in `metrics` use their precomputed column when every row has
/// it; otherwise psnr/ssim/ms_ssim are computed in-process from the images
/// (rows with a precomputed value keep it). Rows that fail are collected
/// into `errors` and excluded from that metric's statistics.
CorrelationReport run_benchmark(const Manifest& manifest, const std::vector<std::string>& metrics, GroupBy group_by,
                                const BenchmarkOptions& opts = {});

nlohmann::ordered_json report_json(const CorrelationReport& report);
/// Aligned text: one row per metric, one column per group, cells "SRCC/KRCC",
/// followed by a PLCC table where '*' marks a saturated fit.
std::string report_table(const CorrelationReport& report);

}  // namespace iqa::bench
