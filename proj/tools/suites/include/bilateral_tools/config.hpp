#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bilateral/bilateral.hpp"
#include "bilateral_tools/report.hpp"

namespace bilateral::tools {

/// Bad command line or configuration. The CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InstanceKind { manufactured, random, constant };

/// How the problem data (u, psi, phi) are produced.
struct InstanceConfig {
  InstanceKind kind = InstanceKind::manufactured;
  ContactStructure structure = ContactStructure::biactive;  ///< manufactured
  double u_target = 10.0;                                   ///< manufactured
  double u_amplitude = 5.0;                                 ///< random
  double u = 0.0;                                           ///< constant
  double psi = -1.0;                                        ///< constant
  double phi = 1.0;                                         ///< constant
};

struct ControlConfig {
  ControlKind kind = ControlKind::identity;
  double diagonal = 1.0;
  double coupling = 0.0;
  double offset = 0.0;
  double gain = 1.0;

  ControlOperator build() const;
};

/// Everything one CLI run needs. Defaults reproduce the committed configs.
struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 7;
  std::string out_dir = ".";

  int dim = 2;
  int nx = 32;
  int ny = 32;
  OperatorSpec op;
  ControlConfig control;
  InstanceConfig instance;
  SolveOptions solve;
  SetThresholds thresholds;

  std::string derivative_variant = "generalized";  ///< directional | gateaux_on_D | generalized
  LimitSide derivative_side = LimitSide::lower;
  std::string direction = "constant";  ///< constant | random
  double direction_scale = 1.0;

  LimitSide mosco_side = LimitSide::lower;
  std::vector<int> schedule{2, 4, 8, 16, 32, 64, 128, 256};

  LimitSide descent_side = LimitSide::lower;
  double alpha = 0.0;
  int steps = 50;
  std::string target = "attainable";  ///< attainable | zero

  series::CounterexampleConfig series;
  std::int64_t checkpoint = 10000;
  std::vector<std::int64_t> divergence_checkpoints{100, 1000, 10000, 100000};

  std::vector<std::string> suites;  ///< verify-all selection, empty for all

  Grid grid() const;
  /// The resolved configuration, echoed into every report.
  Json to_json() const;
};

/// Overlays the keys of a JSON config file on `cfg`. Missing keys keep their
/// values. Throws ConfigError for unreadable files, unknown keys and values of
/// the wrong type.
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_config_json(RunConfig& cfg, const Json& json);

/// Range checks once every override is in. Throws ConfigError.
void validate(const RunConfig& cfg);

/// "a:b" -> a, 2a, 4a, ... up to b. Throws ConfigError.
std::vector<int> parse_schedule(const std::string& text);

/// Problem described by the grid, operator, control and instance sections.
/// Random instances draw from Rng(cfg.seed).
BopProblem build_problem(const RunConfig& cfg);

}  // namespace bilateral::tools
