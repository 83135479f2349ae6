#pragma once

// Verdict reports. Every numeric field is an exact rational string or an
// integer; verdicts are decided by exact comparison only. Wall-clock timing
// is kept on the struct for console logs but never serialized, so report
// files are byte-identical across runs with the same config and seed.

#include <fstream>

#include "nok/okounkov.hpp"

namespace nok {

struct VerdictReport {
  std::string name;
  std::string verdict;  // "pass", "fail", "consistent-within-truncation", "supported", ...
  bool pass = false;
  nlohmann::json quantities = nlohmann::json::object();
  nlohmann::json sequences = nlohmann::json::object();
  nlohmann::json config_echo = nlohmann::json::object();
  std::vector<std::string> notes;
  double wall_seconds = 0;
};

inline nlohmann::json report_json(const VerdictReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["verdict"] = r.verdict;
  j["pass"] = r.pass;
  j["quantities"] = r.quantities;
  j["sequences"] = r.sequences;
  j["config"] = r.config_echo;
  j["notes"] = r.notes;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline std::string dump_deterministic(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// (m, value) sequences as CSV columns with exact entries
inline std::string sequence_csv(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
  std::string s;
  for (size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
  s += "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
    s += "\n";
  }
  return s;
}

inline nlohmann::json growth_json(const GrowthEstimate& g, int d) {
  nlohmann::json j;
  nlohmann::json seq = nlohmann::json::array();
  for (auto [m, v] : g.dims) {
    nlohmann::json row;
    row["m"] = m;
    row["value"] = v;
    Rat md = 1;
    for (int i = 0; i < d; ++i) md *= Rat(m);
    Rat fact = 1;
    for (int i = 2; i <= d; ++i) fact *= i;
    row["normalized"] = rat_str(Rat(fact) * Rat(v) / md);
    seq.push_back(row);
  }
  j["sequence"] = seq;
  j["estimate"] = g.estimate ? rat_str(*g.estimate) : "none";
  j["exact"] = g.exact;
  j["period"] = g.period;
  j["note"] = g.note;
  return j;
}

}  // namespace nok
