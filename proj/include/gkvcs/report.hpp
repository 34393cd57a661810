#pragma once

// Report bundles and their serializations: newline-delimited JSON records,
// CSV spectrum tables, and a human-readable summary.  Everything here is
// deterministic: records are keyed and sorted by (property, variant,
// parameter hash), floating point is emitted with round-trip precision, and
// no wall clock is consulted (GKVCS_TIMESTAMP may inject one explicitly).

#include <gkvcs/verify.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace gkvcs {
namespace report {

using nlohmann::json;

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

struct SpectrumRow {
  std::string sector;
  std::string label;
  double analytic = 0;
  double numeric = 0;
  double abs_error = 0;
};

struct ReportBundle {
  std::string config_hash;
  std::string timestamp;  // empty unless GKVCS_TIMESTAMP is set
  std::string version = "0.1.0";
  std::vector<verify::VerificationReport> checks;
  std::vector<SpectrumRow> spectrum;

  // a check gates the run unless it is report-only or a documented deviation
  int failures(bool strict = false) const {
    int n = 0;
    for (const auto& c : checks) {
      if (c.report_only) {
        if (strict && c.metric > c.tolerance) ++n;
        continue;
      }
      if (!c.pass && !c.documented) ++n;
    }
    return n;
  }

  void sort() {
    std::stable_sort(checks.begin(), checks.end(),
                     [](const verify::VerificationReport& a, const verify::VerificationReport& b) {
                       if (a.property != b.property) return a.property < b.property;
                       if (a.variant != b.variant) return a.variant < b.variant;
                       return fnv1a(a.params) < fnv1a(b.params);
                     });
    std::stable_sort(spectrum.begin(), spectrum.end(), [](const SpectrumRow& a, const SpectrumRow& b) {
      if (a.sector != b.sector) return a.sector < b.sector;
      return a.label < b.label;
    });
  }
};

inline std::string env_timestamp() {
  const char* t = std::getenv("GKVCS_TIMESTAMP");
  return t ? std::string(t) : std::string();
}

inline json check_to_json(const verify::VerificationReport& c) {
  return json{{"type", "check"},         {"property", c.property},   {"variant", c.variant},
              {"params", c.params},      {"metric", c.metric},       {"tolerance", c.tolerance},
              {"tail_bound", c.tail_bound}, {"pass", c.pass},        {"report_only", c.report_only},
              {"documented", c.documented}, {"notes", c.notes}};
}

inline verify::VerificationReport check_from_json(const json& j) {
  verify::VerificationReport c;
  c.property = j.at("property").get<std::string>();
  c.variant = j.at("variant").get<std::string>();
  c.params = j.at("params").get<std::string>();
  c.metric = j.at("metric").get<double>();
  c.tolerance = j.at("tolerance").get<double>();
  c.tail_bound = j.at("tail_bound").get<double>();
  c.pass = j.at("pass").get<bool>();
  c.report_only = j.at("report_only").get<bool>();
  c.documented = j.at("documented").get<bool>();
  c.notes = j.at("notes").get<std::string>();
  return c;
}

inline std::string to_ndjson(ReportBundle bundle) {
  bundle.sort();
  std::ostringstream os;
  os << json{{"type", "meta"},
             {"config_hash", bundle.config_hash},
             {"version", bundle.version},
             {"timestamp", bundle.timestamp}}
            .dump()
     << "\n";
  for (const auto& c : bundle.checks) os << check_to_json(c).dump() << "\n";
  for (const auto& r : bundle.spectrum)
    os << json{{"type", "spectrum"}, {"sector", r.sector},   {"label", r.label},
               {"analytic", r.analytic}, {"numeric", r.numeric}, {"abs_error", r.abs_error}}
              .dump()
       << "\n";
  return os.str();
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string spectrum_csv(ReportBundle bundle) {
  bundle.sort();
  std::ostringstream os;
  os << "sector,label,analytic,numeric,abs_error\n";
  for (const auto& r : bundle.spectrum)
    os << r.sector << "," << r.label << "," << format_double(r.analytic) << "," << format_double(r.numeric)
       << "," << format_double(r.abs_error) << "\n";
  return os.str();
}

inline std::string summary_text(ReportBundle bundle, bool strict = false) {
  bundle.sort();
  std::ostringstream os;
  int pass = 0, fail = 0, info = 0, doc = 0;
  for (const auto& c : bundle.checks) {
    const char* status;
    if (c.report_only) {
      status = "INFO";
      ++info;
    } else if (c.pass) {
      status = "PASS";
      ++pass;
    } else if (c.documented) {
      status = "FAIL (documented)";
      ++doc;
    } else {
      status = "FAIL";
      ++fail;
    }
    os << status << "  " << c.property << " | " << c.variant;
    if (!c.params.empty()) os << " | " << c.params;
    os << "  metric=" << format_double(c.metric) << " tol=" << format_double(c.tolerance);
    if (!c.notes.empty()) os << "  (" << c.notes << ")";
    os << "\n";
  }
  os << "summary: " << pass << " passed, " << fail << " failed, " << doc << " documented deviations, "
     << info << " informational, " << bundle.spectrum.size() << " spectrum rows\n";
  if (strict) os << "strict mode: informational discrepancies gate the exit status\n";
  return os.str();
}

// Merge check/spectrum records of several bundles; the result depends only on
// the record multiset, not the input order.
inline ReportBundle merge(const std::vector<ReportBundle>& bundles) {
  ReportBundle out;
  std::vector<std::string> hashes;
  for (const auto& b : bundles) {
    hashes.push_back(b.config_hash);
    out.checks.insert(out.checks.end(), b.checks.begin(), b.checks.end());
    out.spectrum.insert(out.spectrum.end(), b.spectrum.begin(), b.spectrum.end());
    if (out.timestamp.empty()) out.timestamp = b.timestamp;
    out.version = b.version;
  }
  std::sort(hashes.begin(), hashes.end());
  std::string key;
  for (const auto& h : hashes) key += h + ";";
  out.config_hash = hex64(fnv1a(key));
  out.sort();
  return out;
}

inline ReportBundle from_ndjson(const std::string& text) {
  ReportBundle b;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    auto type = j.at("type").get<std::string>();
    if (type == "meta") {
      b.config_hash = j.at("config_hash").get<std::string>();
      b.version = j.at("version").get<std::string>();
      b.timestamp = j.at("timestamp").get<std::string>();
    } else if (type == "check") {
      b.checks.push_back(check_from_json(j));
    } else if (type == "spectrum") {
      b.spectrum.push_back({j.at("sector").get<std::string>(), j.at("label").get<std::string>(),
                            j.at("analytic").get<double>(), j.at("numeric").get<double>(),
                            j.at("abs_error").get<double>()});
    } else {
      throw ParameterError("report: unknown record type '" + type + "'");
    }
  }
  return b;
}

}  // namespace report
}  // namespace gkvcs
