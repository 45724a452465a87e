#pragma once

// Monte-Carlo simulation of the null limit laws and quantile tables.
//
// Brownian bridges are built from cumulative Gaussian sums on an N-grid and
// pinned at the endpoint. For the unweighted sup and range functionals the
// excursion of the bridge between neighbouring grid nodes is sampled exactly
// (given its endpoints, the maximum of a Brownian bridge over a step of
// length h has P(M > m) = exp(-2 (m - a)(m - b) / h)), which removes the
// O(N^{-1/2}) downward bias of a grid maximum. `grid_only` turns this off so
// that the law matches a statistic observed at exactly N time points.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hdcp/random.hpp"

namespace hdcp {

enum class LimitKind {
    BridgeSup,         // sup w(x)|B(x)|
    BridgeInt,         // int w^2(x) B^2(x) dx
    BridgeAbsInt,      // int w(x)|B(x)| dx
    BridgeSquaredSup,  // sup (B^2(x) - x(1-x))
    EpidemicSup,       // sup_{s<t} |B(t) - B(s)|
    EpidemicInt,       // int int_{s<t} |B(t) - B(s)|
    PanelSup,          // sup sqrt(2)(1-x)^2 W(x^2/(1-x)^2)
    PanelInt,          // int sqrt(2)(1-x)^2 W(x^2/(1-x)^2) dx
    MixturePanel,      // sup of the panel process + xi (B^2(x) - x(1-x))
    Constant,          // degenerate law, for tests
};

struct LimitLaw {
    LimitKind kind = LimitKind::BridgeSup;
    double beta = 0.0;      // weight exponent, bridge kinds only
    double xi = 0.0;        // MixturePanel contamination
    double value = 0.0;     // Constant
    bool grid_only = false;

    static LimitLaw bridge_sup(double beta = 0.0) { return {LimitKind::BridgeSup, beta}; }
    static LimitLaw bridge_int(double beta = 0.0) { return {LimitKind::BridgeInt, beta}; }
    static LimitLaw bridge_abs_int(double beta = 0.0) { return {LimitKind::BridgeAbsInt, beta}; }
    static LimitLaw bridge_squared_sup() { return {LimitKind::BridgeSquaredSup}; }
    static LimitLaw epidemic_sup() { return {LimitKind::EpidemicSup}; }
    static LimitLaw epidemic_int() { return {LimitKind::EpidemicInt}; }
    static LimitLaw panel_sup() { return {LimitKind::PanelSup}; }
    static LimitLaw panel_int() { return {LimitKind::PanelInt}; }
    static LimitLaw mixture_panel(double xi) { return {LimitKind::MixturePanel, 0.0, xi}; }
    static LimitLaw constant(double value) { return {LimitKind::Constant, 0.0, 0.0, value}; }

    [[nodiscard]] LimitLaw on_grid_only(bool on = true) const {
        LimitLaw copy = *this;
        copy.grid_only = on;
        return copy;
    }

    // e.g. "bridge-sup", "bridge-sup:beta=0.25:grid-only", "mixture-panel:xi=0.5"
    [[nodiscard]] std::string descriptor() const;
    static LimitLaw parse(std::string_view descriptor);

    friend bool operator==(const LimitLaw&, const LimitLaw&) = default;
};

void validate(const LimitLaw& law);

struct SimulationSettings {
    std::size_t grid = 1000;
    std::size_t reps = 100000;
    std::uint64_t seed = 0;
};

void validate(const SimulationSettings& settings);

// Brownian bridge at k/N, k = 0..N.
[[nodiscard]] std::vector<double> brownian_bridge(std::size_t grid, Rng& rng);

// sqrt(2)(1-x)^2 W(x^2/(1-x)^2) at k/N, k = 0..N; both endpoints are 0.
[[nodiscard]] std::vector<double> panel_process(std::size_t grid, Rng& rng);

// One draw of the limiting functional on an N-point grid.
[[nodiscard]] double simulate_path(const LimitLaw& law, std::size_t grid, Rng& rng);

// Draw i uses the stream derived from (seed, i); the vector is identical for
// any number of worker threads.
[[nodiscard]] std::vector<double> simulate_draws(const LimitLaw& law,
                                                 const SimulationSettings& settings);

// ceil((1 - alpha) n)-th order statistic of `sorted` (ascending).
[[nodiscard]] double upper_quantile(const std::vector<double>& sorted, double alpha);

// Sorted Monte-Carlo sample of a law; answers quantile and p-value queries.
class NullDistribution {
public:
    NullDistribution() = default;
    NullDistribution(const LimitLaw& law, const SimulationSettings& settings);
    explicit NullDistribution(std::vector<double> draws);

    [[nodiscard]] double quantile(double alpha) const;
    // (#{draws >= statistic} + 1) / (reps + 1)
    [[nodiscard]] double p_value(double statistic) const;
    [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }
    [[nodiscard]] const std::vector<double>& sorted() const noexcept { return sorted_; }

private:
    std::vector<double> sorted_;
};

[[nodiscard]] double quantile(const LimitLaw& law, double alpha, const SimulationSettings& settings);
[[nodiscard]] double mc_pvalue(double statistic, const LimitLaw& law,
                               const SimulationSettings& settings);

struct QuantileTable {
    LimitLaw law;
    SimulationSettings settings;
    std::vector<std::pair<double, double>> levels;  // (alpha, quantile), ascending alpha

    [[nodiscard]] double at(double alpha) const;
    [[nodiscard]] bool has(double alpha) const;

    void write(std::ostream& out) const;
    static QuantileTable read(std::istream& in);
};

[[nodiscard]] QuantileTable make_table(const LimitLaw& law, std::vector<double> alphas,
                                       const SimulationSettings& settings);

// Persists tables under a directory keyed by (law, grid, reps, seed).
class TableCache {
public:
    explicit TableCache(std::filesystem::path directory);

    [[nodiscard]] QuantileTable get(const LimitLaw& law, const std::vector<double>& alphas,
                                    const SimulationSettings& settings) const;
    [[nodiscard]] std::filesystem::path path_for(const LimitLaw& law,
                                                 const SimulationSettings& settings) const;

private:
    std::filesystem::path dir_;
};

// Directory named by HDCP_TABLE_DIR, or empty when unset.
[[nodiscard]] std::filesystem::path default_table_dir();

}  // namespace hdcp
