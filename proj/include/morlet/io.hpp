#pragma once

// File formats.
//
// Signal CSV:     header `t,value`, one sample per line, LF endings.
// Scalogram:      <prefix>.meta.json  grid, scales, omega0, provenance
//                 <prefix>.w.csv      one row per scale, columns re_0,im_0,re_1,im_1,...
//                 <prefix>.abs.csv    one row per scale, |w| per shift
// Numbers are written with 17 significant digits so doubles round-trip.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "morlet/cwt.hpp"
#include "morlet/error.hpp"
#include "morlet/signal.hpp"

namespace morlet::io {

inline constexpr std::string_view tool_version = "1.0.0";
inline constexpr std::string_view scalogram_format = "morlet-scalogram/1";

enum class BoundaryMode { reflect, periodic };

inline std::string_view to_string(BoundaryMode m) {
  return m == BoundaryMode::reflect ? "reflect" : "periodic";
}
inline std::string_view to_string(FrequencyNorm n) {
  return n == FrequencyNorm::exact_dft ? "exact_dft" : "endpoint_span";
}

struct ScalogramMeta {
  BoundaryMode boundary_mode = BoundaryMode::reflect;
  FrequencyNorm frequency_norm = FrequencyNorm::exact_dft;
  std::string input;                  // source file, informational
  std::vector<std::string> pipeline;  // processing steps, informational
};

struct ScalogramFile {
  Scalogram scalogram;
  ScalogramMeta meta;
};

namespace detail {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view field, const std::string& where) {
  const std::string s(trim(field));
  morlet::detail::require(!s.empty(), ErrorCode::malformed_csv, where + ": empty field");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  morlet::detail::require(end == s.c_str() + s.size(), ErrorCode::malformed_csv,
                          where + ": not a number: '" + s + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    out.push_back(line.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  morlet::detail::require(static_cast<bool>(in), ErrorCode::io_failure,
                          "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  morlet::detail::require(static_cast<bool>(out), ErrorCode::io_failure,
                          "cannot write " + path.string());
  out << content;
  out.flush();
  morlet::detail::require(static_cast<bool>(out), ErrorCode::io_failure,
                          "write failed for " + path.string());
}

inline std::vector<std::string_view> lines_of(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

/// Parses a `t,value` CSV. The time column must be uniform to within
/// 1e-6 of a step.
inline RealSignal parse_signal_csv(std::string_view text) {
  using morlet::detail::require;
  const auto lines = detail::lines_of(text);
  require(!lines.empty(), ErrorCode::malformed_csv, "empty signal file");
  const auto header = detail::split(lines[0], ',');
  require(header.size() == 2 && detail::trim(header[0]) == "t" && detail::trim(header[1]) == "value",
          ErrorCode::malformed_csv, "expected header 't,value'");
  std::vector<double> t;
  std::vector<double> v;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = "line " + std::to_string(i + 1);
    const auto fields = detail::split(lines[i], ',');
    require(fields.size() == 2, ErrorCode::malformed_csv, where + ": expected 2 fields");
    t.push_back(detail::parse_double(fields[0], where));
    v.push_back(detail::parse_double(fields[1], where));
    require(std::isfinite(t.back()) && std::isfinite(v.back()), ErrorCode::non_finite,
            where + ": NaN or Inf");
  }
  require(t.size() >= 2, ErrorCode::too_short, "signal needs at least 2 samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  require(dt > 0.0, ErrorCode::non_uniform_sampling, "time column must increase");
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double expected = t.front() + static_cast<double>(i) * dt;
    require(std::abs(t[i] - expected) <= 1e-6 * dt, ErrorCode::non_uniform_sampling,
            "sample " + std::to_string(i) + " deviates from a uniform grid");
  }
  return RealSignal(TimeGrid(t.front(), dt, t.size()), std::move(v));
}

inline RealSignal read_signal_csv(const std::filesystem::path& path) {
  return parse_signal_csv(detail::read_file(path));
}

inline std::string format_signal_csv(const RealSignal& s) {
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += detail::format_double(s.grid().time(static_cast<std::ptrdiff_t>(i)));
    out += ',';
    out += detail::format_double(s[i]);
    out += '\n';
  }
  return out;
}

inline void write_signal_csv(const std::filesystem::path& path, const RealSignal& s) {
  detail::write_file(path, format_signal_csv(s));
}

inline std::filesystem::path meta_path(const std::string& prefix) { return prefix + ".meta.json"; }
inline std::filesystem::path w_path(const std::string& prefix) { return prefix + ".w.csv"; }
inline std::filesystem::path abs_path(const std::string& prefix) { return prefix + ".abs.csv"; }

inline nlohmann::ordered_json meta_json(const Scalogram& sg, const ScalogramMeta& meta,
                                        const std::string& prefix) {
  const std::string base = std::filesystem::path(prefix).filename().string();
  nlohmann::ordered_json j;
  j["format"] = scalogram_format;
  j["tool_version"] = tool_version;
  j["n"] = sg.grid().size();
  j["dt"] = sg.grid().dt();
  j["t_start"] = sg.grid().start();
  j["omega0"] = sg.omega0();
  j["scales"] = std::vector<double>(sg.scales().values().begin(), sg.scales().values().end());
  j["boundary_mode"] = to_string(meta.boundary_mode);
  j["frequency_norm"] = to_string(meta.frequency_norm);
  j["layout"] = {
      {"w", "rows = scales in order; 2n columns, interleaved re,im pairs per shift"},
      {"abs", "rows = scales in order; n columns, modulus per shift"},
  };
  j["files"] = {{"w", base + ".w.csv"}, {"abs", base + ".abs.csv"}};
  j["provenance"] = {{"input", meta.input}, {"pipeline", meta.pipeline}};
  return j;
}

inline void write_scalogram(const std::string& prefix, const Scalogram& sg,
                            const ScalogramMeta& meta) {
  const auto& w = sg.w();
  std::string wcsv;
  std::string acsv;
  for (std::size_t k = 0; k < w.rows(); ++k) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      if (j > 0) {
        wcsv += ',';
        acsv += ',';
      }
      wcsv += detail::format_double(w(k, j).real());
      wcsv += ',';
      wcsv += detail::format_double(w(k, j).imag());
      acsv += detail::format_double(std::abs(w(k, j)));
    }
    wcsv += '\n';
    acsv += '\n';
  }
  detail::write_file(meta_path(prefix), meta_json(sg, meta, prefix).dump(2) + "\n");
  detail::write_file(w_path(prefix), wcsv);
  detail::write_file(abs_path(prefix), acsv);
}

inline ScalogramFile read_scalogram(const std::string& prefix) {
  using morlet::detail::require;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(detail::read_file(meta_path(prefix)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::malformed_meta, "metadata: " + std::string(e.what()));
  }
  ScalogramMeta meta;
  std::size_t n = 0;
  double dt = 0.0;
  double t_start = 0.0;
  double omega0 = 0.0;
  std::vector<double> scales;
  try {
    n = j.at("n").get<std::size_t>();
    dt = j.at("dt").get<double>();
    t_start = j.at("t_start").get<double>();
    omega0 = j.at("omega0").get<double>();
    scales = j.at("scales").get<std::vector<double>>();
    const auto bm = j.at("boundary_mode").get<std::string>();
    require(bm == "reflect" || bm == "periodic", ErrorCode::malformed_meta,
            "unknown boundary_mode '" + bm + "'");
    meta.boundary_mode = bm == "reflect" ? BoundaryMode::reflect : BoundaryMode::periodic;
    const auto fn = j.value("frequency_norm", std::string("exact_dft"));
    require(fn == "exact_dft" || fn == "endpoint_span", ErrorCode::malformed_meta,
            "unknown frequency_norm '" + fn + "'");
    meta.frequency_norm = fn == "exact_dft" ? FrequencyNorm::exact_dft : FrequencyNorm::endpoint_span;
    if (j.contains("provenance")) {
      meta.input = j["provenance"].value("input", std::string());
      meta.pipeline = j["provenance"].value("pipeline", std::vector<std::string>{});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::malformed_meta, "metadata: " + std::string(e.what()));
  }

  const std::string text = detail::read_file(w_path(prefix));
  const auto lines = detail::lines_of(text);
  require(lines.size() == scales.size(), ErrorCode::dimension_mismatch,
          "matrix has " + std::to_string(lines.size()) + " rows, metadata lists " +
              std::to_string(scales.size()) + " scales");
  ComplexMatrix w(scales.size(), n);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto fields = detail::split(lines[k], ',');
    require(fields.size() == 2 * n, ErrorCode::dimension_mismatch,
            "matrix row " + std::to_string(k) + " has " + std::to_string(fields.size()) +
                " fields, expected " + std::to_string(2 * n));
    const std::string where = "matrix row " + std::to_string(k);
    for (std::size_t c = 0; c < n; ++c)
      w(k, c) = {detail::parse_double(fields[2 * c], where),
                 detail::parse_double(fields[2 * c + 1], where)};
  }
  return {Scalogram(ScaleGrid(std::move(scales)), TimeGrid(t_start, dt, n), std::move(w),
                    MorletParams(omega0)),
          std::move(meta)};
}

}  // namespace morlet::io
