#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pitower/json_io.hpp"

namespace pitower {

inline constexpr const char* kToolVersion = "pitower 0.1.0";

struct CheckRecord {
  std::string name;
  bool pass = false;
  std::string detail;
  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct RunReport {
  std::string version = kToolVersion;
  ojson inputs = ojson::object();
  ojson steps = ojson::object();
  std::vector<CheckRecord> checks;

  void check(std::string name, bool pass, std::string detail = {});
  bool all_pass() const;
  friend bool operator==(const RunReport&, const RunReport&) = default;
};

enum class ReportFormat { Json, Csv };

ReportFormat report_format_from_string(const std::string& s);

/// Stable field order, two-space indent, trailing newline.
std::string emit(const RunReport& report);
/// CSV is defined for count series only.
std::string emit(const CountSeries& counts, ReportFormat format);
RunReport parse_report(const std::string& text);

struct Scenario {
  std::string name;
  LocalRingSpec ring;
  std::string law = "default";  // default | gm | additive
  int frobenius_power = 1;
  int D = 0;            // torsion truncation
  int law_degree = 12;  // truncation of F and brackets
  int levels = 1;
  int nmax = 0;         // scalar-model count levels, defaults to max(levels, 3)
  std::vector<std::string> catalog;
  int associativity_checks = 10;
  int bracket_pairs = 5;
  std::optional<std::string> out;
};

Scenario scenario_from_json(const ojson& j);
ojson to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

/// 64-bit FNV-1a of the canonical scenario JSON; seeds every random check.
std::uint64_t scenario_seed(const Scenario& s);

RunReport run_scenario(const Scenario& s);

}  // namespace pitower
