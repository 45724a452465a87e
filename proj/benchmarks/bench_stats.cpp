#include <benchmark/benchmark.h>

#include <hdcp/stats.hpp>

namespace {

hdcp::PanelSeries noise(std::size_t d, std::size_t T) {
    const auto n = static_cast<Eigen::Index>(d);
    return hdcp::generate(hdcp::ChangeSpec{hdcp::Vector::Zero(n), hdcp::SignalShape::amoc(0.5), {}},
                          hdcp::ErrorStructure::independent(hdcp::Vector::Ones(n)), T, std::uint64_t{3});
}

void BM_ProjectedCusum(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto x = noise(d, 100);
    const auto p = hdcp::custom(hdcp::Vector::Ones(static_cast<Eigen::Index>(d)));
    for (auto _ : state) {
        auto u = hdcp::projected_cusum(x, p);
        benchmark::DoNotOptimize(hdcp::amoc_statistic(u, hdcp::WeightFunction(0.0), hdcp::AmocMode::Max));
    }
}

BENCHMARK(BM_ProjectedCusum)->Arg(20)->Arg(200);

void BM_PanelCusum(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto x = noise(d, 100);
    const hdcp::Vector var = hdcp::Vector::Ones(static_cast<Eigen::Index>(d));
    for (auto _ : state) benchmark::DoNotOptimize(hdcp::panel_cusum(x, var));
}

BENCHMARK(BM_PanelCusum)->Arg(20)->Arg(200);

void BM_EpidemicSum(benchmark::State& state) {
    const auto x = noise(1, static_cast<std::size_t>(state.range(0)));
    const auto u = hdcp::with_normalizer(hdcp::cusum(hdcp::Vector(x.data().row(0).transpose())), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(hdcp::epidemic_statistic(u, hdcp::EpidemicMode::Sum));
}

BENCHMARK(BM_EpidemicSum)->Arg(100)->Arg(1000);

}  // namespace
