#include "iqa/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "iqa/errors.hpp"
#include "iqa/image.hpp"

namespace iqa::bench {
namespace {

constexpr std::string_view kScorePrefix = "score:";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_number(const std::string& s, std::size_t line, const std::string& column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("manifest line " + std::to_string(line) + ": column '" + column + "' is not a number: '" +
                        s + "'");
  }
}

bool is_builtin(const std::string& m) { return m == "psnr" || m == "ssim" || m == "ms_ssim"; }

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

Manifest parse_manifest(std::string_view csv, const std::filesystem::path& base_dir) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("manifest is empty");
  const auto header = split_csv_line(line);
  const std::vector<std::string> required = {"ref_path", "dist_path", "mos", "distortion_type", "subtype"};
  if (header.size() < required.size() || !std::equal(required.begin(), required.end(), header.begin()))
    throw ArgumentError("manifest header must start with ref_path,dist_path,mos,distortion_type,subtype");
  Manifest m;
  for (std::size_t c = required.size(); c < header.size(); ++c) {
    if (header[c].rfind(kScorePrefix, 0) != 0 || header[c].size() == kScorePrefix.size())
      throw ArgumentError("extra manifest column '" + header[c] + "' must be named score:<metric>");
    m.score_columns.push_back(header[c].substr(kScorePrefix.size()));
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size())
      throw ArgumentError("manifest line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                          " fields, expected " + std::to_string(header.size()));
    ManifestRow row;
    row.ref_path = f[0];
    row.dist_path = f[1];
    if (row.ref_path.is_relative()) row.ref_path = base_dir / row.ref_path;
    if (row.dist_path.is_relative()) row.dist_path = base_dir / row.dist_path;
    row.mos = parse_number(f[2], line_no, "mos");
    row.distortion_type = f[3];
    row.subtype = f[4];
    if (std::find(kSubtypes.begin(), kSubtypes.end(), row.subtype) == kSubtypes.end())
      throw ArgumentError("manifest line " + std::to_string(line_no) + ": unknown subtype '" + row.subtype + "'");
    for (std::size_t c = required.size(); c < f.size(); ++c)
      if (!f[c].empty())
        row.scores[m.score_columns[c - required.size()]] = parse_number(f[c], line_no, header[c]);
    m.rows.push_back(std::move(row));
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open manifest " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.parent_path());
}

GroupBy parse_group_by(std::string_view s) {
  if (s == "subtype") return GroupBy::subtype;
  if (s == "distortion_type") return GroupBy::distortion_type;
  if (s == "all") return GroupBy::all;
  throw ArgumentError("group-by must be subtype, distortion_type or all");
}

std::string_view group_by_name(GroupBy g) {
  switch (g) {
    case GroupBy::subtype: return "subtype";
    case GroupBy::distortion_type: return "distortion_type";
    case GroupBy::all: return "all";
  }
  return "?";
}

const Cell* CorrelationReport::find(std::string_view metric, std::string_view group) const {
  for (const Cell& c : cells)
    if (c.metric == metric && c.group == group) return &c;
  return nullptr;
}

CorrelationReport run_benchmark(const Manifest& manifest, const std::vector<std::string>& metrics, GroupBy group_by,
                                const BenchmarkOptions& opts) {
  CorrelationReport report;
  report.group_by = group_by;
  report.metrics = metrics;
  const std::size_t n = manifest.rows.size();
  const std::size_t nm = metrics.size();

  // Which metrics need in-process evaluation on which rows.
  std::vector<bool> use_column(nm, false);
  for (std::size_t k = 0; k < nm; ++k) {
    const bool complete = std::all_of(manifest.rows.begin(), manifest.rows.end(),
                                      [&](const ManifestRow& r) { return r.scores.count(metrics[k]) != 0; });
    if (complete) {
      use_column[k] = true;
    } else if (!is_builtin(metrics[k])) {
      throw ArgumentError("metric '" + metrics[k] + "' is neither built in nor fully provided as a score column");
    }
  }

  std::vector<std::vector<std::optional<double>>> values(n, std::vector<std::optional<double>>(nm));
  std::vector<std::vector<RowError>> row_errors(n);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ri = 0; ri < static_cast<std::ptrdiff_t>(n); ++ri) {
    const std::size_t i = static_cast<std::size_t>(ri);
    const ManifestRow& row = manifest.rows[i];
    std::optional<ImageD> ref, dist;
    std::string load_error;
    for (std::size_t k = 0; k < nm; ++k) {
      if (auto it = row.scores.find(metrics[k]); it != row.scores.end()) {
        values[i][k] = it->second;
        continue;
      }
      if (use_column[k]) continue;
      if (!ref && load_error.empty()) {
        try {
          ref = to_double(load_image(row.ref_path));
          dist = to_double(load_image(row.dist_path));
        } catch (const std::exception& e) {
          load_error = e.what();
        }
      }
      if (!load_error.empty()) {
        row_errors[i].push_back({i, metrics[k], load_error});
        continue;
      }
      try {
        const double v = metric_value(parse_metric(metrics[k]), *ref, *dist, opts.metric);
        if (!std::isfinite(v)) throw NumericError("non-finite score");
        values[i][k] = v;
      } catch (const std::exception& e) {
        row_errors[i].push_back({i, metrics[k], e.what()});
      }
    }
  }
  for (auto& errs : row_errors)
    for (auto& e : errs) report.errors.push_back(std::move(e));

  auto group_of = [&](const ManifestRow& r) -> std::string {
    switch (group_by) {
      case GroupBy::subtype: return r.subtype;
      case GroupBy::distortion_type: return r.distortion_type;
      case GroupBy::all: return "all";
    }
    return "all";
  };
  if (group_by == GroupBy::subtype) {
    std::set<std::string> present;
    for (const auto& r : manifest.rows) present.insert(r.subtype);
    for (auto s : kSubtypes)
      if (present.count(std::string(s))) report.groups.emplace_back(s);
  } else {
    std::set<std::string> present;
    for (const auto& r : manifest.rows) present.insert(group_of(r));
    report.groups.assign(present.begin(), present.end());
  }

  for (std::size_t k = 0; k < nm; ++k) {
    for (const std::string& g : report.groups) {
      std::vector<double> obj, mos;
      for (std::size_t i = 0; i < n; ++i)
        if (group_of(manifest.rows[i]) == g && values[i][k]) {
          obj.push_back(*values[i][k]);
          mos.push_back(manifest.rows[i].mos);
        }
      Cell cell;
      cell.metric = metrics[k];
      cell.group = g;
      cell.n = obj.size();
      try {
        cell.srcc = stats::srcc(obj, mos);
        cell.krcc = stats::krcc(obj, mos);
      } catch (const std::exception& e) {
        cell.note = e.what();
      }
      if (cell.n < 5) {
        if (cell.note.empty()) cell.note = "plcc omitted: fewer than 5 samples";
      } else {
        try {
          const auto fit = stats::plcc_poly3(obj, mos);
          cell.plcc = fit.plcc;
          cell.coeffs = fit.coeffs;
          cell.saturation = stats::saturation_diagnostic(obj, mos, fit.coeffs, opts.saturation);
        } catch (const std::exception& e) {
          if (cell.note.empty()) cell.note = std::string("plcc omitted: ") + e.what();
        }
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

nlohmann::ordered_json report_json(const CorrelationReport& report) {
  nlohmann::ordered_json j;
  j["group_by"] = group_by_name(report.group_by);
  j["metrics"] = report.metrics;
  j["groups"] = report.groups;
  j["cells"] = nlohmann::ordered_json::array();
  for (const Cell& c : report.cells) {
    nlohmann::ordered_json cj;
    cj["metric"] = c.metric;
    cj["group"] = c.group;
    cj["n"] = c.n;
    cj["srcc"] = c.srcc ? nlohmann::ordered_json(*c.srcc) : nullptr;
    cj["krcc"] = c.krcc ? nlohmann::ordered_json(*c.krcc) : nullptr;
    cj["plcc"] = c.plcc ? nlohmann::ordered_json(*c.plcc) : nullptr;
    if (c.coeffs) cj["cubic_coeffs"] = *c.coeffs;
    if (c.saturation) {
      cj["saturation_flag"] = c.saturation->saturated;
      cj["quartile_slopes"] = c.saturation->quartile_slopes;
    }
    if (!c.note.empty()) cj["note"] = c.note;
    j["cells"].push_back(std::move(cj));
  }
  j["errors"] = nlohmann::ordered_json::array();
  for (const RowError& e : report.errors)
    j["errors"].push_back({{"row", e.row}, {"metric", e.metric}, {"message", e.message}});
  return j;
}

std::string report_table(const CorrelationReport& report) {
  auto render = [&](const char* title, auto&& cell_text) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> head{title};
    head.insert(head.end(), report.groups.begin(), report.groups.end());
    grid.push_back(head);
    for (const std::string& m : report.metrics) {
      std::vector<std::string> row{m};
      for (const std::string& g : report.groups) {
        const Cell* c = report.find(m, g);
        row.push_back(c ? cell_text(*c) : "-");
      }
      grid.push_back(row);
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& r : grid)
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    std::string out;
    for (const auto& r : grid) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        std::string cell = r[i];
        cell.resize(width[i], ' ');
        out += (i ? "  " : "") + cell;
      }
      while (!out.empty() && out.back() == ' ') out.pop_back();
      out += '\n';
    }
    return out;
  };
  std::string out = render("SRCC/KRCC", [](const Cell& c) {
    if (!c.srcc || !c.krcc) return std::string("-");
    return fixed(*c.srcc) + "/" + fixed(*c.krcc);
  });
  out += '\n';
  out += render("PLCC", [](const Cell& c) {
    if (!c.plcc) return std::string("-");
    return fixed(*c.plcc) + (c.saturation && c.saturation->saturated ? "*" : "");
  });
  if (!report.errors.empty()) out += "\n" + std::to_string(report.errors.size()) + " row error(s)\n";
  return out;
}

}  // namespace iqa::bench
