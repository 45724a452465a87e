#include "hdcp/detector.hpp"

#include <algorithm>
#include <utility>

#include "hdcp/error.hpp"

namespace hdcp {

std::string_view to_string(VariancePolicy v) noexcept {
    switch (v) {
        case VariancePolicy::Known: return "known";
        case VariancePolicy::Naive: return "naive";
        case VariancePolicy::Split: return "split";
    }
    return "?";
}

VariancePolicy parse_variance_policy(std::string_view text) {
    if (text == "known") return VariancePolicy::Known;
    if (text == "naive") return VariancePolicy::Naive;
    if (text == "split") return VariancePolicy::Split;
    fail(ErrorKind::InvalidArgument, "unknown variance policy '" + std::string(text) + "'");
}

namespace {

void check_alpha(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
}

void check_margin(std::size_t margin, std::size_t T) {
    require(margin >= 1 && 2 * margin <= T, ErrorKind::InvalidArgument,
            "segment too short for the requested margin");
}

TestResult decide(double statistic, const NullDistribution& null, double alpha) {
    TestResult r;
    r.statistic = statistic;
    r.critical_value = null.quantile(alpha);
    r.p_value = null.p_value(statistic);
    r.reject = statistic > r.critical_value;
    return r;
}

}  // namespace

LimitLaw null_law(const ProjectionTestConfig& config) {
    if (config.form == ChangeForm::Epidemic) {
        require(config.beta == 0.0, ErrorKind::InvalidArgument,
                "epidemic statistics are unweighted");
        return config.epidemic_mode == EpidemicMode::Max ? LimitLaw::epidemic_sup()
                                                         : LimitLaw::epidemic_int();
    }
    switch (config.amoc_mode) {
        case AmocMode::Max: return LimitLaw::bridge_sup(config.beta);
        case AmocMode::Sum: return LimitLaw::bridge_abs_int(config.beta);
        case AmocMode::SumSquared: return LimitLaw::bridge_int(config.beta);
    }
    return LimitLaw::bridge_sup(config.beta);
}

ProjectionTest::ProjectionTest(Projection p, ProjectionTestConfig config)
    : ProjectionTest(std::move(p), config,
                     std::make_shared<const NullDistribution>(null_law(config),
                                                              config.null_settings)) {}

ProjectionTest::ProjectionTest(Projection p, ProjectionTestConfig config,
                               std::shared_ptr<const NullDistribution> null)
    : p_(std::move(p)), config_(std::move(config)), null_(std::move(null)) {
    check_alpha(config_.alpha);
    static_cast<void>(WeightFunction(config_.beta));
    require(null_ != nullptr && null_->size() > 0, ErrorKind::InvalidArgument,
            "null distribution is empty");
    if (config_.variance == VariancePolicy::Known) {
        require(config_.sigma.has_value(), ErrorKind::InvalidArgument,
                "known variance policy needs a covariance");
        require(static_cast<std::size_t>(config_.sigma->rows()) == p_.dim(),
                ErrorKind::DimensionMismatch, "covariance and projection dimensions differ");
        known_tau_ = tau(p_, *config_.sigma);
    }
}

TestResult ProjectionTest::run(const PanelSeries& x, std::size_t margin) const {
    require(x.dim() == p_.dim(), ErrorKind::DimensionMismatch,
            "projection has length " + std::to_string(p_.dim()) + " but data has " +
                std::to_string(x.dim()) + " components");
    const std::size_t T = x.length();
    check_margin(margin, T);
    const Vector y = x.project(p_.vector());
    CusumProcess u = cusum(y, CusumKind::Projected);
    double scale = 0.0;
    switch (config_.variance) {
        case VariancePolicy::Known: scale = *known_tau_; break;
        case VariancePolicy::Naive: scale = tau_hat1(y); break;
        case VariancePolicy::Split: scale = tau_hat2(y, u); break;
    }
    u = with_normalizer(std::move(u), scale);
    const WeightFunction w(config_.beta);

    const double statistic = config_.form == ChangeForm::Amoc
                                 ? amoc_statistic(u, w, config_.amoc_mode)
                                 : epidemic_statistic(u, config_.epidemic_mode);
    TestResult r = decide(statistic, *null_, config_.alpha);
    if (config_.form == ChangeForm::Amoc) {
        try {
            const std::size_t k = changepoint_index(u, w, margin, T - margin);
            r.changepoint_index = k;
            r.estimated_changepoint = static_cast<double>(k) / static_cast<double>(T);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::AllZero) throw;
        }
    }
    return r;
}

LimitLaw null_law(const PanelTestConfig& config) {
    return config.mode == PanelMode::Max ? LimitLaw::panel_sup() : LimitLaw::panel_int();
}

PanelTest::PanelTest(std::size_t d, PanelTestConfig config)
    : PanelTest(d, config,
                std::make_shared<const NullDistribution>(null_law(config), config.null_settings)) {}

PanelTest::PanelTest(std::size_t d, PanelTestConfig config,
                     std::shared_ptr<const NullDistribution> null)
    : d_(d), config_(std::move(config)), null_(std::move(null)) {
    require(d_ >= 1, ErrorKind::InvalidArgument, "panel test needs d >= 1");
    check_alpha(config_.alpha);
    require(null_ != nullptr && null_->size() > 0, ErrorKind::InvalidArgument,
            "null distribution is empty");
    if (config_.variance == VariancePolicy::Known) {
        require(config_.variances.has_value(), ErrorKind::InvalidArgument,
                "known variance policy needs component variances");
        require(static_cast<std::size_t>(config_.variances->size()) == d_,
                ErrorKind::DimensionMismatch, "variance vector has the wrong length");
    }
}

TestResult PanelTest::run(const PanelSeries& x, std::size_t margin) const {
    require(x.dim() == d_, ErrorKind::DimensionMismatch,
            "panel test built for " + std::to_string(d_) + " components but data has " +
                std::to_string(x.dim()));
    const std::size_t T = x.length();
    check_margin(margin, T);
    const Vector var = config_.variance == VariancePolicy::Known
                           ? *config_.variances
                           : component_variances(x, config_.variance == VariancePolicy::Naive
                                                        ? VarianceMethod::Naive
                                                        : VarianceMethod::SplitAtArgmax);
    const Vector v = panel_cusum(x, var);
    TestResult r = decide(panel_statistic(v, config_.mode), *null_, config_.alpha);
    const auto first = static_cast<Eigen::Index>(margin - 1);
    const auto count = static_cast<Eigen::Index>(T - 2 * margin + 1);
    Eigen::Index at = 0;
    v.segment(first, count).maxCoeff(&at);
    const std::size_t k = static_cast<std::size_t>(first + at) + 1;
    r.changepoint_index = k;
    r.estimated_changepoint = static_cast<double>(k) / static_cast<double>(T);
    return r;
}

}  // namespace hdcp
