// grasq — report emission: CSV check tables, JSON with stable field order and
// an isolated timestamp field, and standalone SVG line charts (log-log when
// both series are positive).
#pragma once

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "grasq/cli/experiments.hpp"

namespace grasq {
namespace cli_detail {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace cli_detail

inline std::string report_csv(const RunReport& r) {
  std::string out = "name,value,bound,pass,invariant\n";
  for (const auto& c : r.checks)
    out += cli_detail::csv_escape(c.name) + "," + cli_detail::fmt_g(c.value) + "," +
           cli_detail::fmt_g(c.bound) + "," + (c.pass ? "pass" : "FAIL") + "," +
           cli_detail::csv_escape(c.invariant) + "\n";
  return out;
}

/// JSON report.  Field order is fixed by construction (ordered_json); the
/// only non-deterministic content (wall-clock timestamp and runtime) lives in
/// the single isolated "timestamp" string field.
inline std::string report_json(const RunReport& r, bool with_timestamp = true) {
  nlohmann::ordered_json j;
  j["schema"] = "grasq-report-v1";
  if (with_timestamp) {
    char stamp[64];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j["timestamp"] = std::string(stamp) + " runtime_s=" + cli_detail::fmt_g(r.seconds);
  }
  nlohmann::ordered_json echo;
  echo["kind"] = r.desc.kind;
  echo["name"] = r.desc.name;
  echo["source"] = r.desc.source_path;
  nlohmann::ordered_json kv = nlohmann::ordered_json::array();
  for (const auto& [k, v] : r.desc.raw) kv.push_back({{"key", k}, {"value", v}});
  echo["values"] = kv;
  j["experiment"] = echo;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"bound", c.bound},
                      {"pass", c.pass},
                      {"invariant", c.invariant}});
  j["checks"] = checks;
  j["error_budget"] = {{"grid", r.budget_grid},
                       {"truncation", r.budget_truncation},
                       {"fixed_point", r.budget_fixed_point}};
  j["all_pass"] = r.all_pass();
  return j.dump(2) + "\n";
}

/// Standalone SVG line chart.  Axes are log10 when every sample of both
/// series is strictly positive, linear otherwise.
inline std::string series_svg(const Series& s) {
  const int W = 640, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;
  bool logx = !s.x.empty(), logy = !s.y.empty();
  for (double v : s.x)
    if (!(v > 0)) logx = false;
  for (double v : s.y)
    if (!(v > 0)) logy = false;
  const bool loglog = logx && logy;
  auto tx = [&](double v) { return loglog ? std::log10(v) : v; };
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!s.x.empty()) {
    x0 = x1 = tx(s.x[0]);
    y0 = y1 = tx(s.y[0]);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, tx(s.y[i]));
      y1 = std::max(y1, tx(s.y[i]));
    }
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  if (y1 - y0 < 1e-12) y1 = y0 + 1;
  auto px = [&](double v) { return ML + (tx(v) - x0) / (x1 - x0) * (W - ML - MR); };
  auto py = [&](double v) { return H - MB - (tx(v) - y0) / (y1 - y0) * (H - MT - MB); };
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"24\" font-family=\"monospace\" font-size=\"15\">%s%s</text>\n",
                ML, s.name.c_str(), loglog ? " (log-log)" : "");
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                ML, H - MB, W - MR, H - MB);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                ML, MT, ML, H - MB);
  svg += buf;
  // axis range labels
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"11\">%s: %s .. %s</text>\n",
                ML, H - MB + 30, s.xlabel.c_str(), cli_detail::fmt_g(x0).c_str(),
                cli_detail::fmt_g(x1).c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"8\" y=\"%d\" font-family=\"monospace\" font-size=\"11\">%s: %s .. %s</text>\n",
                MT - 8, s.ylabel.c_str(), cli_detail::fmt_g(y0).c_str(),
                cli_detail::fmt_g(y1).c_str());
  svg += buf;
  std::string pts;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f ", px(s.x[i]), py(s.y[i]));
    pts += buf;
  }
  svg += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"2\" points=\"" +
         pts + "\"/>\n";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"#1f5fa8\"/>\n",
                  px(s.x[i]), py(s.y[i]));
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

/// Write the requested formats under `dir`; returns the written paths.
inline std::vector<std::string> emit_report(const RunReport& r, const std::string& dir,
                                            const std::vector<std::string>& formats) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::vector<std::string> written;
  auto write_file = [&](const std::string& name, const std::string& body) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw numeric_error("emit_report: cannot write " + path);
    out << body;
    written.push_back(path);
  };
  for (const std::string& f : formats) {
    if (f == "csv") {
      write_file(r.desc.name + ".csv", report_csv(r));
    } else if (f == "json") {
      write_file(r.desc.name + ".json", report_json(r));
    } else if (f == "svg") {
      for (const auto& s : r.series)
        write_file(r.desc.name + "-" + s.name + ".svg", series_svg(s));
    } else {
      throw config_error(r.desc.source_path, -1, "unknown output format '" + f + "'");
    }
  }
  return written;
}

}  // namespace grasq
