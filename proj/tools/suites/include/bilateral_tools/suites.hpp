#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bilateral_tools/report.hpp"

namespace bilateral::tools {

// Randomized property suites. Each one is a pure function of the seed.

/// Stencils, M-matrix and coercivity checks, control monotonicity and
/// control-derivative finite differences.
SuiteResult grid_core_suite(std::uint64_t seed);
/// 1D problems with n <= 8 against the exhaustive pattern oracle.
SuiteResult brute_force_suite(std::uint64_t seed);
/// Order preservation of solutions and contact sets for monotone pairs.
SuiteResult monotonicity_suite(std::uint64_t seed);
/// Lowering psi away from the strictly active lower set leaves y unchanged.
SuiteResult invariance_suite(std::uint64_t seed);
/// Reflected problems have solution -y and swapped contact sets.
SuiteResult reflection_suite(std::uint64_t seed);
/// Exact split of the multiplier, weighted pairing identity, supports.
SuiteResult multiplier_split_suite(std::uint64_t seed);
/// PSOR/PDAS agreement on 2D problems and the Lipschitz bound of u -> y.
SuiteResult solver_properties_suite(std::uint64_t seed);
/// Reduced system versus critical-cone VI, and difference quotients.
SuiteResult derivative_consistency_suite(std::uint64_t seed);
/// Cone membership, homogeneity, linearity and the two generalized derivatives.
SuiteResult derivative_properties_suite(std::uint64_t seed);
/// Limits of reduced derivatives along monotone control sequences.
SuiteResult mosco_suite(std::uint64_t seed);
/// Adjoint identity, gradient against central differences, descent run.
SuiteResult control_suite(std::uint64_t seed);
/// Series computations in log-radius coordinates.
SuiteResult counterexample_suite(std::uint64_t seed);

struct SuiteEntry {
  std::string name;
  int criterion;
  std::function<SuiteResult(std::uint64_t)> run;
};

/// Every suite, in the order verify-all runs them.
const std::vector<SuiteEntry>& suite_registry();

/// Runs the named suites (all of them when `only` is empty) in registry
/// order. Throws InvalidSpec for an unknown name.
std::vector<SuiteResult> run_suites(std::uint64_t seed, const std::vector<std::string>& only = {});

}  // namespace bilateral::tools
