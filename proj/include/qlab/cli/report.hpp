#pragma once

// SuiteReport and its three renderings (json, tsv, human). Field order is
// fixed, so identical inputs always give identical bytes.

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "qlab/cli/cache.hpp"
#include "qlab/harness/report.hpp"

namespace qlab {

inline constexpr const char* kReportSchema = "qlab.suite_report";
inline constexpr int kReportSchemaVersion = 1;

enum class ReportFormat { Human, Json, Tsv };

inline const char* to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::Human: return "human";
    case ReportFormat::Json: return "json";
    case ReportFormat::Tsv: return "tsv";
  }
  return "?";
}

inline ReportFormat parse_report_format(const std::string& s) {
  for (auto f : {ReportFormat::Human, ReportFormat::Json, ReportFormat::Tsv})
    if (s == to_string(f)) return f;
  throw DomainError("unknown report format '" + s + "'");
}

struct SuiteReport {
  std::string tool_version = kToolVersion;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<VerificationReport> reports;
  std::vector<std::string> inconsistencies;
  Status aggregate = Status::Skipped;
  long total_ms = 0;
};

inline nlohmann::ordered_json report_to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["id"] = to_string(r.spec.id);
  j["prime"] = r.spec.prime;
  j["ell"] = r.spec.ells;
  j["params"] = {{"m_max", r.spec.m_max}, {"r_max", r.spec.r_max}, {"split_max", r.spec.split_max}, {"inert_max", r.spec.inert_max},
                 {"n_max", r.spec.n_max}};
  j["precision_override"] = r.spec.precision_override ? nlohmann::ordered_json(*r.spec.precision_override) : nlohmann::ordered_json(nullptr);
  j["status"] = to_string(r.status);
  j["diagnostic"] = is_diagnostic(r.spec.id);
  j["modulus"] = r.modulus;
  auto& w = j["witnesses"];
  w = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.witnesses) w[k] = v;
  j["max_index_tested"] = r.max_index_tested;
  j["ms"] = static_cast<long>(std::llround(r.elapsed_ms));
  j["failure_detail"] = r.failure_detail ? nlohmann::ordered_json(*r.failure_detail) : nlohmann::ordered_json(nullptr);
  j["note"] = r.note ? nlohmann::ordered_json(*r.note) : nlohmann::ordered_json(nullptr);
  return j;
}

inline VerificationReport report_from_json(const nlohmann::ordered_json& j) {
  VerificationReport r;
  const auto id = parse_check_id(j.at("id").get<std::string>());
  if (!id) throw Error("unknown check id in report");
  r.spec.id = *id;
  r.spec.prime = j.at("prime").get<std::uint64_t>();
  r.spec.ells = j.at("ell").get<std::vector<int>>();
  const auto& p = j.at("params");
  r.spec.m_max = p.at("m_max").get<long>();
  r.spec.r_max = p.at("r_max").get<long>();
  r.spec.split_max = p.at("split_max").get<long>();
  r.spec.inert_max = p.at("inert_max").get<long>();
  r.spec.n_max = p.at("n_max").get<long>();
  if (!j.at("precision_override").is_null()) r.spec.precision_override = j.at("precision_override").get<long>();
  r.status = parse_status(j.at("status").get<std::string>());
  r.modulus = j.at("modulus").get<std::string>();
  for (const auto& [k, v] : j.at("witnesses").items()) r.witnesses.emplace_back(k, v.get<std::string>());
  r.max_index_tested = j.at("max_index_tested").get<long>();
  r.elapsed_ms = static_cast<double>(j.at("ms").get<long>());
  if (!j.at("failure_detail").is_null()) r.failure_detail = j.at("failure_detail").get<std::string>();
  if (!j.at("note").is_null()) r.note = j.at("note").get<std::string>();
  return r;
}

inline nlohmann::ordered_json suite_to_json(const SuiteReport& s) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = s.tool_version;
  j["config"] = s.config;
  auto& reports = j["reports"];
  reports = nlohmann::ordered_json::array();
  for (const auto& r : s.reports) reports.push_back(report_to_json(r));
  j["inconsistencies"] = s.inconsistencies;
  j["aggregate"] = to_string(s.aggregate);
  j["total_ms"] = s.total_ms;
  return j;
}

inline SuiteReport suite_from_json(const nlohmann::ordered_json& j) {
  try {
    if (j.at("schema") != kReportSchema) throw Error("not a suite report");
    if (j.at("schema_version") != kReportSchemaVersion) throw Error("unsupported report schema version");
    SuiteReport s;
    s.tool_version = j.at("tool_version").get<std::string>();
    s.config = j.at("config");
    for (const auto& r : j.at("reports")) s.reports.push_back(report_from_json(r));
    s.inconsistencies = j.at("inconsistencies").get<std::vector<std::string>>();
    s.aggregate = parse_status(j.at("aggregate").get<std::string>());
    s.total_ms = j.at("total_ms").get<long>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed suite report: ") + e.what());
  }
}

namespace detail {

inline std::string join_ells(const std::vector<int>& ells) {
  std::string s;
  for (std::size_t i = 0; i < ells.size(); ++i) s += (i ? "," : "") + std::to_string(ells[i]);
  return s.empty() ? "-" : s;
}

inline std::string join_witnesses(const Witnesses& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? ";" : "") + w[i].first + "=" + w[i].second;
  return s.empty() ? "-" : s;
}

}  // namespace detail

inline std::string emit_tsv(const SuiteReport& s) {
  std::ostringstream os;
  os << "id\tp\tell\tmodulus\tstatus\twitnesses\tmax_index\tms\n";
  for (const auto& r : s.reports) {
    os << to_string(r.spec.id) << '\t' << r.spec.prime << '\t' << detail::join_ells(r.spec.ells) << '\t' << (r.modulus.empty() ? "-" : r.modulus)
       << '\t' << to_string(r.status) << '\t' << detail::join_witnesses(r.witnesses) << '\t' << r.max_index_tested << '\t'
       << std::llround(r.elapsed_ms) << '\n';
  }
  os << "# aggregate\t" << to_string(s.aggregate) << '\n';
  return os.str();
}

inline std::string emit_human(const SuiteReport& s) {
  std::ostringstream os;
  os << "qlab " << s.tool_version << "\n\n";
  os << std::left << std::setw(26) << "check" << std::setw(6) << "p" << std::setw(9) << "status" << std::setw(10) << "max_index"
     << "detail\n";
  for (const auto& r : s.reports) {
    std::string detail = r.failure_detail ? *r.failure_detail : (r.note ? *r.note : "");
    if (is_diagnostic(r.spec.id) && detail.rfind("diagnostic", 0) != 0) detail = "[diagnostic] " + detail;
    os << std::setw(26) << to_string(r.spec.id) << std::setw(6) << (r.spec.prime ? std::to_string(r.spec.prime) : "-") << std::setw(9)
       << to_string(r.status) << std::setw(10) << r.max_index_tested << detail << '\n';
  }
  bool header = false;
  for (const auto& r : s.reports) {
    if (r.spec.id != CheckId::ClosureScalars || r.status == Status::Skipped) continue;
    if (!header) {
      os << "\nclosure scalars (mod p^(4-l))\n" << std::setw(6) << "p" << std::setw(4) << "l" << std::setw(10) << "gamma" << std::setw(10) << "beta"
         << "gamma-27beta\n";
      header = true;
    }
    for (int ell : r.spec.ells) {
      const auto* g = r.find_witness("gamma_" + std::to_string(ell));
      const auto* b = r.find_witness("beta_" + std::to_string(ell));
      if (!g || !b) continue;
      const mpz_class diff = mpz_class(*g) - 27 * mpz_class(*b);
      os << std::setw(6) << r.spec.prime << std::setw(4) << ell << std::setw(10) << *g << std::setw(10) << *b << diff.get_str() << '\n';
    }
  }
  for (const auto& msg : s.inconsistencies) os << "\ninconsistency: " << msg;
  os << "\naggregate: " << to_string(s.aggregate);
  if (s.total_ms > 0) os << " (" << s.total_ms << " ms)";
  os << '\n';
  return os.str();
}

inline std::string emit_report(const SuiteReport& s, ReportFormat f) {
  switch (f) {
    case ReportFormat::Json: return suite_to_json(s).dump(2) + "\n";
    case ReportFormat::Tsv: return emit_tsv(s);
    case ReportFormat::Human: return emit_human(s);
  }
  return {};
}

}  // namespace qlab
