#pragma once

// Configured tests: a statistic, a variance policy and a simulated null law,
// applied to a PanelSeries (or a window of one).

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "hdcp/limits.hpp"
#include "hdcp/model.hpp"
#include "hdcp/projection.hpp"
#include "hdcp/stats.hpp"

namespace hdcp {

enum class VariancePolicy {
    Known,  // tau(p) from a supplied covariance, or supplied component variances
    Naive,  // tau_hat1
    Split,  // tau_hat2
};

[[nodiscard]] std::string_view to_string(VariancePolicy v) noexcept;
[[nodiscard]] VariancePolicy parse_variance_policy(std::string_view text);

class Detector {
public:
    virtual ~Detector() = default;

    // Location search (when a change is flagged) is restricted to
    // k in [margin, T - margin].
    [[nodiscard]] virtual TestResult run(const PanelSeries& x, std::size_t margin = 1) const = 0;
    [[nodiscard]] virtual std::size_t dim() const noexcept = 0;
    [[nodiscard]] virtual double level() const noexcept = 0;
};

enum class ChangeForm { Amoc, Epidemic };

struct ProjectionTestConfig {
    double alpha = 0.05;
    double beta = 0.0;
    ChangeForm form = ChangeForm::Amoc;
    AmocMode amoc_mode = AmocMode::Max;
    EpidemicMode epidemic_mode = EpidemicMode::Max;
    VariancePolicy variance = VariancePolicy::Split;
    std::optional<Matrix> sigma;  // required for VariancePolicy::Known
    SimulationSettings null_settings{};
};

[[nodiscard]] LimitLaw null_law(const ProjectionTestConfig& config);

class ProjectionTest final : public Detector {
public:
    ProjectionTest(Projection p, ProjectionTestConfig config);
    // Reuses an already simulated null distribution of the right law.
    ProjectionTest(Projection p, ProjectionTestConfig config,
                   std::shared_ptr<const NullDistribution> null);

    [[nodiscard]] TestResult run(const PanelSeries& x, std::size_t margin = 1) const override;
    [[nodiscard]] std::size_t dim() const noexcept override { return p_.dim(); }
    [[nodiscard]] double level() const noexcept override { return config_.alpha; }

    [[nodiscard]] const Projection& projection() const noexcept { return p_; }
    [[nodiscard]] const NullDistribution& null() const noexcept { return *null_; }

private:
    Projection p_;
    ProjectionTestConfig config_;
    std::optional<double> known_tau_;
    std::shared_ptr<const NullDistribution> null_;
};

struct PanelTestConfig {
    double alpha = 0.05;
    PanelMode mode = PanelMode::Max;
    VariancePolicy variance = VariancePolicy::Naive;
    std::optional<Vector> variances;  // required for VariancePolicy::Known
    SimulationSettings null_settings{};
};

[[nodiscard]] LimitLaw null_law(const PanelTestConfig& config);

class PanelTest final : public Detector {
public:
    PanelTest(std::size_t d, PanelTestConfig config);
    PanelTest(std::size_t d, PanelTestConfig config, std::shared_ptr<const NullDistribution> null);

    [[nodiscard]] TestResult run(const PanelSeries& x, std::size_t margin = 1) const override;
    [[nodiscard]] std::size_t dim() const noexcept override { return d_; }
    [[nodiscard]] double level() const noexcept override { return config_.alpha; }

private:
    std::size_t d_;
    PanelTestConfig config_;
    std::shared_ptr<const NullDistribution> null_;
};

}  // namespace hdcp
