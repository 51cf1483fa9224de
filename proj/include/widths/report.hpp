#pragma once

// Experiment configuration, report assembly, and machine-readable emission.
//
// A report is a deterministic function of (config, seed, library version):
// JSON output is a single object with keys config/records/constants/flags/
// timings, CSV output has the fixed header k,a_k,upper,lower,ratio,flags
// with one row per record; all floating values carry 17 significant digits
// and files are byte-identical across runs with identical config and seed
// (timings are zeroed unless explicitly enabled, to preserve that contract).
// The exact meaning of the record columns varies by experiment and is
// documented alongside each runner; the common convention is that a record
// asserts lower <= a_k <= upper whenever the respective bound applies.

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "univariate.hpp"
#include "version.hpp"

namespace widths {

enum class ExperimentKind { Star, Dirichlet, Weyl, Lemmas, Spectrum1d, Volume };

inline const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Star: return "star";
    case ExperimentKind::Dirichlet: return "dirichlet";
    case ExperimentKind::Weyl: return "weyl";
    case ExperimentKind::Lemmas: return "lemmas";
    case ExperimentKind::Spectrum1d: return "spectrum1d";
    default: return "volume";
  }
}

inline ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "star") return ExperimentKind::Star;
  if (name == "dirichlet") return ExperimentKind::Dirichlet;
  if (name == "weyl") return ExperimentKind::Weyl;
  if (name == "lemmas") return ExperimentKind::Lemmas;
  if (name == "spectrum1d") return ExperimentKind::Spectrum1d;
  if (name == "volume") return ExperimentKind::Volume;
  throw InvalidParameter("unknown experiment: " + name);
}

enum class OutputFormat { Json, Csv };

inline const char* to_string(OutputFormat format) {
  return format == OutputFormat::Json ? "json" : "csv";
}

inline OutputFormat format_from_string(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  throw InvalidParameter("unknown output format: " + name);
}

enum class SymbolChoice { LpSum, Euclidean };

inline const char* to_string(SymbolChoice symbol) {
  return symbol == SymbolChoice::LpSum ? "lp" : "euclidean";
}

inline SymbolChoice symbol_from_string(const std::string& name) {
  if (name == "lp") return SymbolChoice::LpSum;
  if (name == "euclidean") return SymbolChoice::Euclidean;
  throw InvalidParameter("unknown symbol: " + name);
}

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Star;
  int m = 1;
  int d = 1;
  double length = 1.0;
  std::size_t k_max = 100;
  double tol = 1e-10;
  std::uint64_t seed = 42;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  SymbolChoice symbol = SymbolChoice::LpSum;
  OutputFormat format = OutputFormat::Json;
  std::string out_path;            // empty: stdout
  std::size_t stride = 1;          // record thinning; assertions cover every k
  std::size_t samples = 200000;    // Monte Carlo sample count (volume/lemmas)
  double ratio_tol = 0.10;         // Weyl ratio policy, not a theorem claim
  std::size_t frontier_budget = static_cast<std::size_t>(1) << 26;
  bool timings = false;
  bool inject_perturbation = false;

  void validate() const {
    if (k_max < 1) throw InvalidParameter("k_max must be >= 1");
    if (!(tol > 0.0) || !(tol < 1.0))
      throw InvalidParameter("tol must lie in (0, 1)");
    if (m < 1) throw InvalidParameter("m must be >= 1");
    if (d < 1) throw InvalidParameter("d must be >= 1");
    if (!(length > 0.0)) throw InvalidParameter("L must be positive");
    if (stride < 1) throw InvalidParameter("stride must be >= 1");
    if (samples < 1000) throw InvalidParameter("samples must be >= 1000");
    if (!(ratio_tol > 0.0) || !(ratio_tol < 1.0))
      throw InvalidParameter("ratio_tol must lie in (0, 1)");
    if (frontier_budget < 1)
      throw InvalidParameter("frontier budget must be >= 1");
  }
};

struct RecordRow {
  std::size_t k = 0;
  double a_k = 0.0;
  std::vector<int> witness;  // empty when not meaningful
  double upper = 0.0;
  double lower = 0.0;
  double ratio = 0.0;
  std::string flags;  // semicolon-separated markers, "ok" when unremarkable
};

struct NamedFlag {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string library_version = widths::library_version;
  std::vector<RecordRow> records;
  std::vector<std::pair<std::string, double>> constants;
  std::vector<NamedFlag> flags;
  std::vector<std::pair<std::string, double>> timings;

  bool all_pass() const {
    for (const auto& f : flags)
      if (!f.pass) return false;
    return true;
  }

  void add_constant(const std::string& name, double value) {
    constants.emplace_back(name, value);
  }
  void add_flag(const std::string& name, bool pass,
                const std::string& detail) {
    flags.push_back(NamedFlag{name, pass, detail});
  }
};

namespace detail {

inline std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline void json_escape_into(std::string& out, const std::string& text) {
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
}

inline void json_string_into(std::string& out, const std::string& text) {
  out += '"';
  json_escape_into(out, text);
  out += '"';
}

}  // namespace detail

inline std::string render_json(const ExperimentReport& report) {
  std::string out;
  out.reserve(4096 + 128 * report.records.size());
  const auto& c = report.config;

  out += "{\n  \"config\": {";
  out += "\"experiment\": ";
  detail::json_string_into(out, to_string(c.experiment));
  out += ", \"m\": " + std::to_string(c.m);
  out += ", \"d\": " + std::to_string(c.d);
  out += ", \"L\": " + detail::format_double(c.length);
  out += ", \"k_max\": " + std::to_string(c.k_max);
  out += ", \"tol\": " + detail::format_double(c.tol);
  out += ", \"seed\": " + std::to_string(c.seed);
  out += ", \"bc\": ";
  detail::json_string_into(out, to_string(c.bc));
  out += ", \"symbol\": ";
  detail::json_string_into(out, to_string(c.symbol));
  out += ", \"stride\": " + std::to_string(c.stride);
  out += ", \"samples\": " + std::to_string(c.samples);
  out += ", \"ratio_tol\": " + detail::format_double(c.ratio_tol);
  out += ", \"frontier_budget\": " + std::to_string(c.frontier_budget);
  out += ", \"inject_perturbation\": ";
  out += c.inject_perturbation ? "true" : "false";
  out += "},\n  \"library_version\": ";
  detail::json_string_into(out, report.library_version);

  out += ",\n  \"records\": [";
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const RecordRow& r = report.records[i];
    out += i == 0 ? "\n    {" : ",\n    {";
    out += "\"k\": " + std::to_string(r.k);
    out += ", \"a_k\": " + detail::format_double(r.a_k);
    if (!r.witness.empty()) {
      out += ", \"witness\": [";
      for (std::size_t j = 0; j < r.witness.size(); ++j) {
        if (j) out += ",";
        out += std::to_string(r.witness[j]);
      }
      out += "]";
    }
    out += ", \"upper\": " + detail::format_double(r.upper);
    out += ", \"lower\": " + detail::format_double(r.lower);
    out += ", \"ratio\": " + detail::format_double(r.ratio);
    out += ", \"flags\": ";
    detail::json_string_into(out, r.flags);
    out += "}";
  }
  out += report.records.empty() ? "]" : "\n  ]";

  out += ",\n  \"constants\": {";
  for (std::size_t i = 0; i < report.constants.size(); ++i) {
    out += i == 0 ? "\n    " : ",\n    ";
    detail::json_string_into(out, report.constants[i].first);
    out += ": " + detail::format_double(report.constants[i].second);
  }
  out += report.constants.empty() ? "}" : "\n  }";

  out += ",\n  \"flags\": [";
  for (std::size_t i = 0; i < report.flags.size(); ++i) {
    const NamedFlag& f = report.flags[i];
    out += i == 0 ? "\n    {" : ",\n    {";
    out += "\"name\": ";
    detail::json_string_into(out, f.name);
    out += ", \"pass\": ";
    out += f.pass ? "true" : "false";
    out += ", \"detail\": ";
    detail::json_string_into(out, f.detail);
    out += "}";
  }
  out += report.flags.empty() ? "]" : "\n  ]";

  out += ",\n  \"timings\": {";
  for (std::size_t i = 0; i < report.timings.size(); ++i) {
    out += i == 0 ? "\n    " : ",\n    ";
    detail::json_string_into(out, report.timings[i].first);
    out += ": " + detail::format_double(report.timings[i].second);
  }
  out += report.timings.empty() ? "}" : "\n  }";

  out += "\n}\n";
  return out;
}

inline std::string render_csv(const ExperimentReport& report) {
  std::string out = "k,a_k,upper,lower,ratio,flags\n";
  out.reserve(out.size() + 96 * report.records.size());
  for (const RecordRow& r : report.records) {
    out += std::to_string(r.k);
    out += ',';
    out += detail::format_double(r.a_k);
    out += ',';
    out += detail::format_double(r.upper);
    out += ',';
    out += detail::format_double(r.lower);
    out += ',';
    out += detail::format_double(r.ratio);
    out += ',';
    out += r.flags;  // semicolon-separated markers, never contains commas
    out += '\n';
  }
  return out;
}

inline std::string render_report(const ExperimentReport& report,
                                 OutputFormat format) {
  return format == OutputFormat::Json ? render_json(report)
                                      : render_csv(report);
}

// Writes the rendered report to the path, or to stdout when the path is
// empty or "-".
inline void emit_report(const ExperimentReport& report, OutputFormat format,
                        const std::string& path) {
  const std::string text = render_report(report, format);
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream) {
    throw IoError("cannot open report file '" + path +
                  "': " + std::strerror(errno));
  }
  stream.write(text.data(), static_cast<std::streamsize>(text.size()));
  stream.flush();
  if (!stream) {
    throw IoError("cannot write report file '" + path +
                  "': " + std::strerror(errno));
  }
}

}  // namespace widths
