// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "ait/enumeration.hpp"
#include "ait/kernels.hpp"
#include "ait/machine.hpp"
#include "ait/numerics.hpp"

namespace {

using ait::Exec;

std::shared_ptr<const ait::Computer> sdvm() { return ait::machine_by_name("sdvm"); }

void BM_Explore(benchmark::State& state, Exec exec) {
  const auto m = sdvm();
  const auto depth = static_cast<std::size_t>(state.range(0));
  // The stage-10 frontier: enough roots for the parallel loop to split.
  std::vector<ait::BitString> roots;
  const auto st = ait::enumerate_to(m, 10, Exec::serial);
  for (const auto& p : *st.pending()) roots.push_back(p.prefix);
  for (auto _ : state) {
    auto e = ait::explore(*m, roots, depth, depth, exec);
    benchmark::DoNotOptimize(e.records.data());
  }
}

void BM_Advance(benchmark::State& state, Exec exec) {
  const auto m = sdvm();
  const auto target = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto st = ait::advance_to(ait::EnumerationState::initial(m), target, exec);
    benchmark::DoNotOptimize(st.records().size());
  }
}

void BM_EvaluateTerms(benchmark::State& state, Exec exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ait::Interval q(ait::Dyadic(3).shifted(-1));
  const auto prec = ait::Precision::of(128);
  for (auto _ : state) {
    auto out = ait::evaluate_terms(
        n,
        [&](std::size_t i) {
          const ait::Interval x(ait::Dyadic(static_cast<long>(i + 1)).shifted(-20));
          return ait::tsallis_kernel_F(x, q, prec);
        },
        exec);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Explore, serial, Exec::serial)->Arg(20)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Explore, parallel, Exec::parallel)->Arg(20)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Advance, serial, Exec::serial)->Arg(20)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Advance, parallel, Exec::parallel)->Arg(20)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EvaluateTerms, serial, Exec::serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EvaluateTerms, parallel, Exec::parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
