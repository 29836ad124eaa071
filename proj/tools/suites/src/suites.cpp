#include "bilateral_tools/suites.hpp"

#include <algorithm>

#include "bilateral/errors.hpp"

namespace bilateral::tools {

const std::vector<SuiteEntry>& suite_registry() {
  static const std::vector<SuiteEntry> registry{
      {"grid_core", 0, grid_core_suite},
      {"brute_force", 1, brute_force_suite},
      {"monotonicity", 2, monotonicity_suite},
      {"invariance", 3, invariance_suite},
      {"reflection", 4, reflection_suite},
      {"multiplier_split", 5, multiplier_split_suite},
      {"solver_properties", 0, solver_properties_suite},
      {"derivative_consistency", 6, derivative_consistency_suite},
      {"derivative_properties", 0, derivative_properties_suite},
      {"mosco", 7, mosco_suite},
      {"control", 8, control_suite},
      {"counterexample", 9, counterexample_suite},
  };
  return registry;
}

std::vector<SuiteResult> run_suites(std::uint64_t seed, const std::vector<std::string>& only) {
  const auto& reg = suite_registry();
  for (const auto& name : only) {
    const bool known = std::any_of(reg.begin(), reg.end(),
                                   [&](const SuiteEntry& e) { return e.name == name; });
    if (!known) throw InvalidSpec("unknown suite '" + name + "'");
  }
  std::vector<SuiteResult> out;
  for (const auto& e : reg) {
    if (!only.empty() && std::find(only.begin(), only.end(), e.name) == only.end()) continue;
    out.push_back(e.run(seed));
  }
  return out;
}

}  // namespace bilateral::tools
