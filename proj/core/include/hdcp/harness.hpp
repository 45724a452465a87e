#pragma once

// Monte-Carlo size and power studies with CSV output.
//
// Every replicate i draws its errors from the stream (seed, i); the null and
// the alternative panel of a replicate share those errors, and so do all
// methods. Power is computed against empirically size-corrected critical
// values: the (1 - level) quantile of the same method over the null panels.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hdcp/detector.hpp"
#include "hdcp/model.hpp"

namespace hdcp {

enum class Method {
    Oracle,
    QuasiOracle,
    PreOracle,
    RandomProjection,
    ScaledSearch,
    PanelKnownVar,
    PanelEstVar,
};

[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] Method parse_method(std::string_view text);
[[nodiscard]] bool is_projection(Method m) noexcept;

struct ExperimentConfig {
    std::size_t d = 200;
    std::size_t T = 100;
    std::size_t reps = 1000;
    double level = 0.05;
    std::uint64_t seed = 1;
    std::vector<double> sweep;
    std::vector<Method> methods;
    // Normaliser of the projection statistics and of PanelEstVar.
    VariancePolicy variance = VariancePolicy::Split;
    double change_norm = 0.0;
    double angle = 0.0;
    double phi = 0.0;
    // Paths used for the asymptotic critical values of the size study.
    std::size_t law_reps = 100000;
};

void validate(const ExperimentConfig& config);

enum class CriticalValues { Asymptotic, SizeCorrected };

[[nodiscard]] std::string_view to_string(CriticalValues c) noexcept;

struct PowerPoint {
    double x;
    Method method;
    double rate;
    double mc_se;
};

struct PowerCurve {
    std::string name;
    std::vector<PowerPoint> points;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    CriticalValues critical_values = CriticalValues::SizeCorrected;
    std::vector<std::pair<std::string, std::string>> echo;

    [[nodiscard]] double rate(double x, Method m) const;
    [[nodiscard]] double mc_se(double x, Method m) const;
    [[nodiscard]] std::vector<double> rates(Method m) const;
};

// Header `sweep_value,method,rejection_rate,mc_se,reps,seed` preceded by the
// config as `#` comment lines.
void write_csv(const PowerCurve& curve, std::ostream& out);

// cos(angle) u + sin(angle) v with v the unit Gram-Schmidt residual of the
// alternating vector (+1, -1, +1, ...) against u. u must be a unit vector.
[[nodiscard]] Vector rotate_in_plane(const Vector& u, double angle);

// Unit vector (1, ..., 1) / sqrt(d).
[[nodiscard]] Vector flat_direction(std::size_t d);

// One simulation setting: errors, change and the directions the methods use.
struct Scenario {
    ErrorStructure structure;
    Vector delta;      // actual change (may be zero)
    Vector direction;  // change direction assumed by oracle/quasi/pre-oracle
    Vector search;     // search direction for ScaledSearch
};

// reps x methods matrix of statistics, with or without the change added.
[[nodiscard]] Matrix simulate_statistics(const Scenario& scenario,
                                         const std::vector<Method>& methods,
                                         const ExperimentConfig& config, bool with_change);

// (1 - alpha) empirical quantile of null statistics.
[[nodiscard]] double empirical_size_correct(std::vector<double> null_statistics, double alpha);
[[nodiscard]] double empirical_size_correct(Method method, const Scenario& scenario,
                                            const ExperimentConfig& config);

// Figure 1: rejection rates under the null across the phi sweep with
// s_j = 1, Phi_j = phi, against asymptotic critical values simulated on the
// sample's own grid.
[[nodiscard]] PowerCurve size_experiment(const ExperimentConfig& config);

// Figure 2: Sigma = I, delta = change_norm * flat; sweep = angle of the search
// direction away from delta.
[[nodiscard]] PowerCurve power_vs_angle(const ExperimentConfig& config);

// Figure 3: Sigma = I, ||delta|| = change_norm fixed; sweep = d.
[[nodiscard]] PowerCurve power_vs_dimension(const ExperimentConfig& config);

// Figure 4: s_j = 1, Phi_j = phi, delta at config.angle to Phi; sweep = phi.
[[nodiscard]] PowerCurve power_vs_phi(const ExperimentConfig& config);

// Figure 5: s_i = 0.5 + i/d, Phi_i = config.phi, delta at pi/4 to Phi;
// sweep = ||delta|| / sqrt(d).
[[nodiscard]] PowerCurve power_vs_changesize(const ExperimentConfig& config);

// Paper-scale defaults for figure 1..5.
[[nodiscard]] ExperimentConfig default_config(int figure);

// Runs a figure and writes its CSV files into `dir`; returns the paths.
// Figure 1 writes fig1_known/tau1/tau2, figure 4 one file per angle in
// {0, pi/8, pi/4, pi/2}, figure 5 one per phi in {0, 0.5, 1}.
std::vector<std::filesystem::path> run_figure(int figure, const ExperimentConfig& config,
                                              const std::filesystem::path& dir);

}  // namespace hdcp
