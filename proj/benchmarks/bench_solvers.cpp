#include <benchmark/benchmark.h>

#include "bilateral/bilateral.hpp"
#include "bilateral_tools/oracle.hpp"

namespace {

using namespace bilateral;

BopProblem random_instance(int n, std::uint64_t seed) {
  const Grid g = Grid::square(n);
  Rng rng(seed);
  return random_problem(std::make_shared<const AssembledOperator>(assemble({}, g)),
                        ControlOperator::identity(), rng, 10.0);
}

void BM_Solve(benchmark::State& state, ViMethod method) {
  const BopProblem p = random_instance(static_cast<int>(state.range(0)), 1);
  SolveOptions o;
  o.method = method;
  int iterations = 0;
  for (auto _ : state) {
    const BopSolution s = solve_bop(p, o);
    iterations = s.iterations;
    benchmark::DoNotOptimize(s.y.values().data());
  }
  state.counters["iterations"] = iterations;
  state.counters["nodes"] = static_cast<double>(p.grid().size());
}
BENCHMARK_CAPTURE(BM_Solve, pdas, ViMethod::pdas)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, psor, ViMethod::psor)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_GeneralizedDerivative(benchmark::State& state) {
  const Grid g = Grid::square(static_cast<int>(state.range(0)));
  const ManufacturedInstance mi =
      manufactured_instance(std::make_shared<const AssembledOperator>(assemble({}, g)),
                            ControlOperator::identity(), ContactStructure::biactive);
  const Linearization lin = linearize(mi.problem);
  const GridFunction h = GridFunction::constant(g, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(generalized_derivative(lin, h, LimitSide::lower).eta.values().data());
  }
}
BENCHMARK(BM_GeneralizedDerivative)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DirectionalDerivative(benchmark::State& state) {
  const Grid g = Grid::square(static_cast<int>(state.range(0)));
  const ManufacturedInstance mi =
      manufactured_instance(std::make_shared<const AssembledOperator>(assemble({}, g)),
                            ControlOperator::identity(), ContactStructure::biactive);
  const Linearization lin = linearize(mi.problem);
  const GridFunction h = GridFunction::constant(g, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(directional_derivative(lin, h).eta.values().data());
  }
}
BENCHMARK(BM_DirectionalDerivative)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SeriesPairing(benchmark::State& state) {
  series::CounterexampleConfig c;
  c.k_max = state.range(0);
  const auto w = series::RadialProfile::log_power(c.beta);
  for (auto _ : state) {
    benchmark::DoNotOptimize(series::pair_with_radial(c, w).total.back());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SeriesPairing)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PatternOracle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = Grid::line(n);
  Rng rng(2);
  const BopProblem p = random_problem(std::make_shared<const AssembledOperator>(assemble({}, g)),
                                      ControlOperator::identity(), rng, 10.0);
  const Eigen::MatrixXd a(p.op().matrix());
  for (auto _ : state) {
    benchmark::DoNotOptimize(tools::enumerate_patterns(a, p.load().values(), p.obstacles().psi().values(),
                                                       p.obstacles().phi().values())
                                 .accepted);
  }
}
BENCHMARK(BM_PatternOracle)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
