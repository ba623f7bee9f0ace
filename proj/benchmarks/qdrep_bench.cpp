#include <benchmark/benchmark.h>

#include "qdrep/fidelity.hpp"
#include "qdrep/mcsim.hpp"
#include "qdrep/params.hpp"
#include "qdrep/qsim/swap.hpp"
#include "qdrep/qsim/transfer.hpp"
#include "qdrep/quadrature.hpp"

namespace {

void BM_GaussHermite(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qdrep::gauss_hermite(n));
}
BENCHMARK(BM_GaussHermite)->Arg(21)->Arg(84)->Arg(336);

void BM_EntanglementFixed(benchmark::State& state) {
  const auto model = qdrep::EntanglementModel::from(qdrep::default_parameters().physical);
  const int n = static_cast<int>(state.range(0));
  qdrep::entanglement_fidelity_fixed(model, n);  // warm the rule cache
  for (auto _ : state) benchmark::DoNotOptimize(qdrep::entanglement_fidelity_fixed(model, n));
}
BENCHMARK(BM_EntanglementFixed)->Arg(21)->Arg(42)->Arg(84);

void BM_Budget(benchmark::State& state) {
  const auto params = qdrep::default_parameters();
  for (auto _ : state) benchmark::DoNotOptimize(qdrep::compute_budget(params));
}
BENCHMARK(BM_Budget);

void BM_Contour(benchmark::State& state) {
  const auto params = qdrep::default_parameters();
  std::vector<double> fp;
  for (int i = 1; i <= 10; ++i) fp.push_back(100.0 * i);
  const std::vector<double> pol{0.80, 0.85, 0.90, 0.95, 0.99, 0.999};
  for (auto _ : state) benchmark::DoNotOptimize(qdrep::fidelity_contour(params, fp, pol, 1));
}
BENCHMARK(BM_Contour)->Unit(benchmark::kMillisecond);

void BM_McTrials(benchmark::State& state) {
  auto cfg = qdrep::protocol_from_params(qdrep::default_parameters());
  cfg.nesting_level = static_cast<int>(state.range(0));
  cfg.trials = 10000;
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(qdrep::simulate_trials(cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}
BENCHMARK(BM_McTrials)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_ChainOracle(benchmark::State& state) {
  const qdrep::qsim::ChainComponents c{0.995, 0.99397, 0.9948, 0.99983, 0.99996};
  const int links = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qdrep::qsim::chain_fidelity_oracle(links, c));
}
BENCHMARK(BM_ChainOracle)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FullSpaceTransfer(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const qdrep::qsim::TransferParams p{n, 1.0, 1};
  const auto start = qdrep::qsim::embed_collective(qdrep::qsim::collective_product_state(1.0, 0.0, n), n);
  for (auto _ : state) benchmark::DoNotOptimize(qdrep::qsim::full_space_oracle(start, p, 0.3));
}
BENCHMARK(BM_FullSpaceTransfer)->Arg(4)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
