#include "bilateral_tools/config.hpp"

#include <exception>
#include <memory>
#include <type_traits>

#include <charconv>
#include <fstream>
#include <set>

#include "bilateral_tools/suites.hpp"

namespace bilateral::tools {

namespace {

std::string instance_kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::manufactured: return "manufactured";
    case InstanceKind::random: return "random";
    case InstanceKind::constant: return "constant";
  }
  return "";
}

InstanceKind parse_instance_kind(const std::string& s) {
  if (s == "manufactured") return InstanceKind::manufactured;
  if (s == "random") return InstanceKind::random;
  if (s == "constant") return InstanceKind::constant;
  throw ConfigError("instance.kind must be manufactured, random or constant, got '" + s + "'");
}

ContactStructure parse_structure(const std::string& s) {
  if (s == "strict") return ContactStructure::strict;
  if (s == "biactive") return ContactStructure::biactive;
  throw ConfigError("instance.structure must be strict or biactive, got '" + s + "'");
}

// Reads the keys of one JSON object, rejecting anything it was not asked for.
class Section {
 public:
  Section(const Json& json, std::string path) : json_(json), path_(std::move(path)) {
    if (!json_.is_object()) throw ConfigError(path_ + " must be an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : json_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key " + path_ + "." + key);
    }
  }

  const Json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = json_.find(key);
    return it == json_.end() ? nullptr : &*it;
  }

  void read(const std::string& key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(where(key) + " must be a number");
      out = v->get<double>();
    }
  }
  void read(const std::string& key, int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(where(key) + " must be an integer");
      out = v->get<int>();
    }
  }
  void read(const std::string& key, std::int64_t& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(where(key) + " must be an integer");
      out = v->get<std::int64_t>();
    }
  }
  void read(const std::string& key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(where(key) + " must be a string");
      out = v->get<std::string>();
    }
  }
  template <class T>
  void read_list(const std::string& key, std::vector<T>& out) {
    if (const Json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(where(key) + " must be an array");
      out.clear();
      for (const auto& e : *v) {
        if constexpr (std::is_same_v<T, std::string>) {
          if (!e.is_string()) throw ConfigError(where(key) + " must hold strings");
        } else {
          if (!e.is_number_integer()) throw ConfigError(where(key) + " must hold integers");
        }
        out.push_back(e.get<T>());
      }
    }
  }
  /// Applies `fn` to the string value, turning library parse errors into ConfigError.
  template <class F>
  void read_enum(const std::string& key, F&& fn) {
    std::string s;
    const bool present = json_.contains(key);
    read(key, s);
    if (!present) return;
    try {
      fn(s);
    } catch (const Error& e) {
      throw ConfigError(where(key) + ": " + e.what());
    }
  }
  std::string where(const std::string& key) const { return path_ + "." + key; }

 private:
  const Json& json_;
  std::string path_;
  std::set<std::string> seen_;
};

LimitSide side_of(const std::string& s) { return parse_limit_side(s); }

}  // namespace

ControlOperator ControlConfig::build() const {
  switch (kind) {
    case ControlKind::identity: return ControlOperator::identity();
    case ControlKind::affine_monotone: return ControlOperator::affine(diagonal, coupling, offset);
    case ControlKind::smooth_monotone_superposition: return ControlOperator::superposition(gain);
  }
  return ControlOperator::identity();
}

Grid RunConfig::grid() const {
  return dim == 1 ? Grid::line(nx) : Grid::rectangle(nx, ny);
}

Json RunConfig::to_json() const {
  Json j;
  j["seed"] = seed;
  j["grid"] = {{"dim", dim}, {"nx", nx}, {"ny", dim == 1 ? 1 : ny}};
  j["operator"] = {{"kind", to_string(op.kind)},
                   {"reaction", op.reaction},
                   {"convection", {op.convection[0], op.convection[1]}}};
  j["control"] = {{"kind", to_string(control.kind)},
                  {"diagonal", control.diagonal},
                  {"coupling", control.coupling},
                  {"offset", control.offset},
                  {"gain", control.gain}};
  j["instance"] = {{"kind", instance_kind_name(instance.kind)},
                   {"structure", instance.structure == ContactStructure::strict ? "strict" : "biactive"},
                   {"u_target", instance.u_target},
                   {"u_amplitude", instance.u_amplitude},
                   {"u", instance.u},
                   {"psi", instance.psi},
                   {"phi", instance.phi}};
  j["solver"] = {{"method", to_string(solve.method)},
                 {"tol", solve.tol > 0 ? solve.tol : default_tolerance(solve.method)},
                 {"max_iter", solve.max_iter},
                 {"omega", solve.omega}};
  j["thresholds"] = {{"eps_active", thresholds.eps_active}, {"eps_mult", thresholds.eps_mult}};
  j["derivative"] = {{"variant", derivative_variant},
                     {"side", to_string(derivative_side)},
                     {"direction", direction},
                     {"scale", direction_scale}};
  j["mosco"] = {{"side", to_string(mosco_side)}, {"schedule", schedule}};
  j["descent"] = {{"side", to_string(descent_side)},
                  {"alpha", alpha},
                  {"steps", steps},
                  {"target", target}};
  j["counterexample"] = {{"beta", series.beta},
                         {"k_max", series.k_max},
                         {"weights", series::to_string(series.weights)},
                         {"checkpoint", checkpoint},
                         {"divergence_checkpoints", divergence_checkpoints}};
  j["verify"] = {{"suites", suites}};
  return j;
}

std::vector<int> parse_schedule(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("schedule must look like a:b, got '" + text + "'");
  auto to_int = [&](std::string_view s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ConfigError("schedule bounds must be integers, got '" + text + "'");
    }
    return v;
  };
  const std::string_view sv(text);
  const int a = to_int(sv.substr(0, colon));
  const int b = to_int(sv.substr(colon + 1));
  if (a < 1 || b < a) throw ConfigError("schedule a:b needs 1 <= a <= b, got '" + text + "'");
  std::vector<int> out;
  for (long long n = a; n <= b; n *= 2) out.push_back(static_cast<int>(n));
  return out;
}

void apply_config_json(RunConfig& cfg, const Json& json) {
  Section top(json, "config");
  if (const Json* v = top.find("seed")) {
    if (!v->is_number_unsigned()) throw ConfigError("config.seed must be a nonnegative integer");
    cfg.seed = v->get<std::uint64_t>();
  }
  if (const Json* v = top.find("grid")) {
    Section s(*v, "grid");
    s.read("dim", cfg.dim);
    int n = 0;
    s.read("n", n);
    if (n != 0) cfg.nx = cfg.ny = n;
    s.read("nx", cfg.nx);
    s.read("ny", cfg.ny);
  }
  if (const Json* v = top.find("operator")) {
    Section s(*v, "operator");
    s.read_enum("kind", [&](const std::string& k) { cfg.op.kind = parse_operator_kind(k); });
    s.read("reaction", cfg.op.reaction);
    if (const Json* c = s.find("convection")) {
      if (!c->is_array() || c->size() != 2 || !(*c)[0].is_number() || !(*c)[1].is_number()) {
        throw ConfigError("operator.convection must be an array of two numbers");
      }
      cfg.op.convection = {(*c)[0].get<double>(), (*c)[1].get<double>()};
    }
  }
  if (const Json* v = top.find("control")) {
    Section s(*v, "control");
    s.read_enum("kind", [&](const std::string& k) { cfg.control.kind = parse_control_kind(k); });
    s.read("diagonal", cfg.control.diagonal);
    s.read("coupling", cfg.control.coupling);
    s.read("offset", cfg.control.offset);
    s.read("gain", cfg.control.gain);
  }
  if (const Json* v = top.find("instance")) {
    Section s(*v, "instance");
    std::string kind;
    s.read("kind", kind);
    if (!kind.empty()) cfg.instance.kind = parse_instance_kind(kind);
    std::string structure;
    s.read("structure", structure);
    if (!structure.empty()) cfg.instance.structure = parse_structure(structure);
    s.read("u_target", cfg.instance.u_target);
    s.read("u_amplitude", cfg.instance.u_amplitude);
    s.read("u", cfg.instance.u);
    s.read("psi", cfg.instance.psi);
    s.read("phi", cfg.instance.phi);
  }
  if (const Json* v = top.find("solver")) {
    Section s(*v, "solver");
    s.read_enum("method", [&](const std::string& k) { cfg.solve.method = parse_vi_method(k); });
    s.read("tol", cfg.solve.tol);
    s.read("max_iter", cfg.solve.max_iter);
    s.read("omega", cfg.solve.omega);
  }
  if (const Json* v = top.find("thresholds")) {
    Section s(*v, "thresholds");
    s.read("eps_active", cfg.thresholds.eps_active);
    s.read("eps_mult", cfg.thresholds.eps_mult);
  }
  if (const Json* v = top.find("derivative")) {
    Section s(*v, "derivative");
    s.read("variant", cfg.derivative_variant);
    s.read_enum("side", [&](const std::string& k) { cfg.derivative_side = side_of(k); });
    s.read("direction", cfg.direction);
    s.read("scale", cfg.direction_scale);
  }
  if (const Json* v = top.find("mosco")) {
    Section s(*v, "mosco");
    s.read_enum("side", [&](const std::string& k) { cfg.mosco_side = side_of(k); });
    std::string sched;
    s.read("schedule", sched);
    if (!sched.empty()) cfg.schedule = parse_schedule(sched);
  }
  if (const Json* v = top.find("descent")) {
    Section s(*v, "descent");
    s.read_enum("side", [&](const std::string& k) { cfg.descent_side = side_of(k); });
    s.read("alpha", cfg.alpha);
    s.read("steps", cfg.steps);
    s.read("target", cfg.target);
  }
  if (const Json* v = top.find("counterexample")) {
    Section s(*v, "counterexample");
    s.read("beta", cfg.series.beta);
    s.read("k_max", cfg.series.k_max);
    s.read_enum("weights", [&](const std::string& k) { cfg.series.weights = series::parse_weight_rule(k); });
    s.read("checkpoint", cfg.checkpoint);
    s.read_list("divergence_checkpoints", cfg.divergence_checkpoints);
  }
  if (const Json* v = top.find("verify")) {
    Section s(*v, "verify");
    s.read_list("suites", cfg.suites);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Json json;
  try {
    json = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  apply_config_json(cfg, json);
}

void validate(const RunConfig& cfg) {
  if (cfg.dim != 1 && cfg.dim != 2) throw ConfigError("grid.dim must be 1 or 2");
  if (cfg.nx < 1 || (cfg.dim == 2 && cfg.ny < 1)) throw ConfigError("grid sizes must be at least 1");
  if (!(cfg.solve.tol >= 0.0)) throw ConfigError("solver.tol must be nonnegative");
  if (!(cfg.solve.omega > 0.0 && cfg.solve.omega < 2.0)) throw ConfigError("solver.omega must lie in (0, 2)");
  if (!(cfg.thresholds.eps_active > 0.0 && cfg.thresholds.eps_mult > 0.0)) {
    throw ConfigError("thresholds must be positive");
  }
  const std::set<std::string> variants{"directional", "gateaux_on_D", "generalized"};
  if (!variants.count(cfg.derivative_variant)) {
    throw ConfigError("derivative.variant must be directional, gateaux_on_D or generalized");
  }
  if (cfg.direction != "constant" && cfg.direction != "random") {
    throw ConfigError("derivative.direction must be constant or random");
  }
  if (cfg.schedule.empty()) throw ConfigError("mosco.schedule is empty");
  if (!(cfg.alpha >= 0.0)) throw ConfigError("descent.alpha must be nonnegative");
  if (cfg.steps < 1) throw ConfigError("descent.steps must be at least 1");
  if (cfg.target != "attainable" && cfg.target != "zero") {
    throw ConfigError("descent.target must be attainable or zero");
  }
  try {
    cfg.series.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("counterexample: ") + e.what());
  }
  if (cfg.checkpoint < 1 || cfg.checkpoint >= cfg.series.k_max) {
    throw ConfigError("counterexample.checkpoint must lie in [1, k_max)");
  }
  try {
    const Grid g = cfg.grid();
    assemble(cfg.op, g);
    cfg.control.build();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  for (const auto& name : cfg.suites) {
    bool known = false;
    for (const auto& e : suite_registry()) known = known || e.name == name;
    if (!known) throw ConfigError("unknown suite '" + name + "'");
  }
}

BopProblem build_problem(const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  auto op = std::make_shared<const AssembledOperator>(assemble(cfg.op, grid));
  const ControlOperator f = cfg.control.build();
  switch (cfg.instance.kind) {
    case InstanceKind::manufactured:
      return manufactured_instance(op, f, cfg.instance.structure, cfg.instance.u_target).problem;
    case InstanceKind::random: {
      Rng rng(cfg.seed);
      return random_problem(op, f, rng, cfg.instance.u_amplitude);
    }
    case InstanceKind::constant:
      return BopProblem(op, f,
                        ObstaclePair(GridFunction::constant(grid, cfg.instance.psi),
                                     GridFunction::constant(grid, cfg.instance.phi)),
                        GridFunction::constant(grid, cfg.instance.u));
  }
  throw ConfigError("unknown instance kind");
}

}  // namespace bilateral::tools
