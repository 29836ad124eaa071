#include "bilateral_tools/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bilateral/errors.hpp"
#include "bilateral/io.hpp"

namespace bilateral::tools {

Check check_le(std::string name, double value, double limit) {
  return Check{std::move(name), value <= limit, value, limit, "<="};
}

Check check_ge(std::string name, double value, double limit) {
  return Check{std::move(name), value >= limit, value, limit, ">="};
}

Check check_true(std::string name, bool ok) {
  return Check{std::move(name), ok, ok ? 1.0 : 0.0, 1.0, "holds"};
}

bool SuiteResult::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<std::string> SuiteResult::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(name + "/" + c.name);
  }
  return out;
}

namespace {

// Infinities and NaN have no JSON literal; they are written as strings.
Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

Json to_json(const Check& check) {
  Json j;
  j["name"] = check.name;
  j["passed"] = check.passed;
  j["relation"] = check.relation;
  j["value"] = number(check.value);
  j["limit"] = number(check.limit);
  return j;
}

Json to_json(const SuiteResult& suite) {
  Json j;
  j["name"] = suite.name;
  j["criterion"] = suite.criterion;
  j["passed"] = suite.passed();
  j["checks"] = Json::array();
  for (const auto& c : suite.checks) j["checks"].push_back(to_json(c));
  j["metrics"] = suite.metrics;
  return j;
}

Json report_header(const std::string& experiment) {
  Json j;
  j["schema"] = kSchemaName;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = experiment;
  return j;
}

Json suites_report(const std::string& experiment, unsigned long long seed,
                   const std::vector<SuiteResult>& suites) {
  Json j = report_header(experiment);
  j["seed"] = seed;
  bool ok = true;
  Json failures = Json::array();
  for (const auto& s : suites) {
    for (const auto& f : s.failures()) failures.push_back(f);
    ok = ok && s.passed();
  }
  j["passed"] = ok;
  j["failures"] = failures;
  j["suites"] = Json::array();
  for (const auto& s : suites) j["suites"].push_back(to_json(s));
  return j;
}

std::string suites_csv(const std::vector<SuiteResult>& suites) {
  std::ostringstream out;
  out << "suite,criterion,check,relation,value,limit,passed\n";
  for (const auto& s : suites) {
    for (const auto& c : s.checks) {
      out << s.name << ',' << s.criterion << ',' << c.name << ',' << c.relation << ','
          << format_double(c.value) << ',' << format_double(c.limit) << ','
          << (c.passed ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_json(const std::string& path, const Json& json) {
  write_text(path, json.dump(2) + "\n");
}

}  // namespace bilateral::tools
