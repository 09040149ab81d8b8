#include <benchmark/benchmark.h>

#include "critmult/convergence.hpp"
#include "critmult/corpus.hpp"
#include "critmult/stability.hpp"

namespace cm = critmult;

namespace {

const cm::ProblemFile& problem(const std::string& name) {
  static const auto corpus = cm::builtin_corpus();
  for (const auto& p : corpus)
    if (p.name == name) return p;
  throw std::runtime_error("missing corpus problem " + name);
}

void BM_ConvertRepCube(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  cm::HPoly cube(d);
  for (std::size_t i = 0; i < d; ++i) {
    cube.add_ineq(cm::unit(d, i), 1);
    cube.add_ineq(cm::scale(cm::Rational(-1), cm::unit(d, i)), 1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(cm::convert_rep(cube));
}
BENCHMARK(BM_ConvertRepCube)->DenseRange(2, 5);

void BM_ClassifyThreeConstraints(benchmark::State& state) {
  const auto& p = problem("three_constraints");
  const auto vs = p.system();
  const auto& pt = p.point("crit");
  for (auto _ : state) benchmark::DoNotOptimize(cm::classify_multiplier(vs, pt.x, pt.v));
}
BENCHMARK(BM_ClassifyThreeConstraints);

void BM_CoderivativeRouteThreeConstraints(benchmark::State& state) {
  const auto& p = problem("three_constraints");
  const auto vs = p.system();
  const auto& pt = p.point("noncrit");
  for (auto _ : state) benchmark::DoNotOptimize(cm::classify_multiplier_coderivative(vs, pt.x, pt.v));
}
BENCHMARK(BM_CoderivativeRouteThreeConstraints);

void BM_SoscX3Active(benchmark::State& state) {
  const auto& p = problem("x3_active");
  const auto vs = p.system();
  const auto& pt = p.point("crit");
  for (auto _ : state) benchmark::DoNotOptimize(cm::sosc_check(vs, pt.x, pt.v));
}
BENCHMARK(BM_SoscX3Active);

void BM_LimitingNormalConeThreeConstraints(benchmark::State& state) {
  const auto& p = problem("three_constraints");
  const auto vs = p.system();
  const auto& pt = p.point("crit");
  const auto z = vs.phi().eval(pt.x);
  for (auto _ : state) benchmark::DoNotOptimize(cm::limiting_normal_cone(vs.graph(), z, pt.v));
}
BENCHMARK(BM_LimitingNormalConeThreeConstraints);

void BM_NewtonRunThreeConstraints(benchmark::State& state) {
  const auto& p = problem("three_constraints");
  const auto vs = p.system();
  const auto& pt = p.point("crit");
  const cm::Iterate start{{0.05, 0.03, -0.02}, {3.04, 0.02, 2.01}};
  for (auto _ : state) benchmark::DoNotOptimize(cm::newton_kkt_run(vs, pt.x, start));
}
BENCHMARK(BM_NewtonRunThreeConstraints);

}  // namespace

BENCHMARK_MAIN();
