#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bilateral::tools {

/// Version of the JSON layout written by every experiment.
inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kSchemaName = "bilateral.report";

using Json = nlohmann::ordered_json;

/// One assertion: the measured value, the limit it was held to and how.
struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  ///< "<=", ">=" or "holds"
};

Check check_le(std::string name, double value, double limit);
Check check_ge(std::string name, double value, double limit);
/// value is 1 or 0, limit 1.
Check check_true(std::string name, bool ok);

struct SuiteResult {
  std::string name;
  /// Acceptance criterion covered by the suite, 0 for supporting suites.
  int criterion = 0;
  std::vector<Check> checks;
  Json metrics = Json::object();

  void add(Check c) { checks.push_back(std::move(c)); }
  bool passed() const;
  /// "suite/check" for every failed check.
  std::vector<std::string> failures() const;
};

Json to_json(const Check& check);
Json to_json(const SuiteResult& suite);

/// {"schema", "schema_version", "experiment"}: the first keys of every report.
Json report_header(const std::string& experiment);

/// Report for a list of suites: header, seed, overall verdict, failure list and
/// one entry per suite. An empty list gives a passing report with no entries.
Json suites_report(const std::string& experiment, unsigned long long seed,
                   const std::vector<SuiteResult>& suites);

/// One row per check: suite,criterion,check,relation,value,limit,passed.
std::string suites_csv(const std::vector<SuiteResult>& suites);

/// Writes the JSON with two-space indentation and a final newline.
/// Throws IoError.
void write_json(const std::string& path, const Json& json);
void write_text(const std::string& path, const std::string& text);

}  // namespace bilateral::tools
