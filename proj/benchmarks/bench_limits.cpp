#include <benchmark/benchmark.h>

#include <hdcp/limits.hpp>
#include <hdcp/projection.hpp>

namespace {

void BM_SimulatePath(benchmark::State& state, hdcp::LimitLaw law) {
    const auto grid = static_cast<std::size_t>(state.range(0));
    hdcp::Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(hdcp::simulate_path(law, grid, rng));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK_CAPTURE(BM_SimulatePath, bridge_sup, hdcp::LimitLaw::bridge_sup())->Arg(100)->Arg(1000);
BENCHMARK_CAPTURE(BM_SimulatePath, bridge_sup_grid, hdcp::LimitLaw::bridge_sup().on_grid_only())->Arg(1000);
BENCHMARK_CAPTURE(BM_SimulatePath, bridge_int, hdcp::LimitLaw::bridge_int())->Arg(1000);
BENCHMARK_CAPTURE(BM_SimulatePath, epidemic_int, hdcp::LimitLaw::epidemic_int())->Arg(1000);
BENCHMARK_CAPTURE(BM_SimulatePath, panel_sup, hdcp::LimitLaw::panel_sup())->Arg(1000);

void BM_InverseSqrt(benchmark::State& state) {
    const auto d = static_cast<Eigen::Index>(state.range(0));
    hdcp::Rng rng(2);
    hdcp::Matrix a(d, d);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    const hdcp::Matrix m = a * a.transpose() + hdcp::Matrix::Identity(d, d);
    for (auto _ : state) benchmark::DoNotOptimize(hdcp::inverse_sqrt(m));
}

BENCHMARK(BM_InverseSqrt)->Arg(10)->Arg(50)->Arg(200);

}  // namespace
