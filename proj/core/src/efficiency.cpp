#include "hdcp/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "hdcp/error.hpp"
#include "hdcp/stats.hpp"

namespace hdcp {

namespace {

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
    require(a.size() == b.size(), ErrorKind::DimensionMismatch, what);
}

void require_square(const Matrix& m, const Vector& v) {
    require(m.rows() == m.cols() && m.rows() == v.size(), ErrorKind::DimensionMismatch,
            "covariance and vector dimensions differ");
}

Vector positive_variances(const Vector& s, const Vector& phi) {
    require_same_dim(s, phi, "s and phi dimensions differ");
    require((s.array() > 0.0).all(), ErrorKind::NonPositiveVariance, "loadings s must be > 0");
    return s.array().square() + phi.array().square();
}

}  // namespace

double eff_projection(const Vector& delta, const Projection& p, const Matrix& sigma) {
    require_square(sigma, delta);
    require(p.dim() == static_cast<std::size_t>(delta.size()), ErrorKind::DimensionMismatch,
            "projection and change dimensions differ");
    return std::abs(delta.dot(p.vector())) / tau(p, sigma);
}

double eff_oracle(const Vector& delta, const Matrix& sigma) {
    require_square(sigma, delta);
    require_spd(sigma);
    const Eigen::LLT<Matrix> llt(sigma);
    return std::sqrt(std::max(0.0, delta.dot(llt.solve(delta))));
}

double eff_mixed_oracle(const Vector& delta, const Vector& s, const Vector& phi) {
    require_same_dim(delta, phi, "change and phi dimensions differ");
    require_same_dim(s, phi, "s and phi dimensions differ");
    require((s.array() > 0.0).all(), ErrorKind::NonPositiveVariance, "loadings s must be > 0");
    const double nd = delta.norm();
    const double np = phi.norm();
    require(nd > 0.0, ErrorKind::ZeroChange, "change is zero");
    require(np > 0.0 && std::abs(delta.dot(phi)) / (nd * np) >= 1.0 - 1e-10,
            ErrorKind::NotProportional, "change is not proportional to phi");
    const Vector s2 = s.array().square();
    const double contamination = 1.0 + (phi.array().square() / s2.array()).sum();
    const double ratio = (delta.array().square() / s2.array()).sum() / (nd * nd);
    return nd / std::sqrt(contamination) * std::sqrt(ratio);
}

double eff_panel(const Vector& delta, const Vector& variances) {
    require_same_dim(delta, variances, "change and variance dimensions differ");
    require((variances.array() > 0.0).all(), ErrorKind::NonPositiveVariance,
            "variances must be > 0");
    const double d = static_cast<double>(delta.size());
    return std::pow(d, -0.25) * std::sqrt((delta.array().square() / variances.array()).sum());
}

MisspecifiedPanel eff_panel_misspecified(const Vector& delta, const Vector& s, const Vector& phi) {
    require_same_dim(delta, s, "change and s dimensions differ");
    const Vector sigma2 = positive_variances(s, phi);
    const double a_d = (phi.array().square() / sigma2.array()).sum();
    require(a_d > 1e-14, ErrorKind::ZeroDependence, "A_d vanishes; no common factor");
    const double signal = (delta.array().square() / sigma2.array()).sum();
    return {std::sqrt(signal / a_d), a_d};
}

double detection_cone(std::size_t d) {
    require(d >= 2, ErrorKind::InvalidArgument, "detection cone needs d >= 2");
    return std::acos(std::pow(static_cast<double>(d), -0.25));
}

double projection_angle(const Vector& delta, const Projection& p, const Matrix& sigma) {
    require_square(sigma, delta);
    const Vector a = sqrt_psd(sigma) * p.vector();
    const Vector b = inverse_sqrt(sigma) * delta;
    const double na = a.norm();
    const double nb = b.norm();
    require(na > 0.0, ErrorKind::DegenerateProjection, "projected noise variance is zero");
    require(nb > 0.0, ErrorKind::ZeroChange, "change is zero");
    return std::acos(std::clamp(std::abs(a.dot(b)) / (na * nb), 0.0, 1.0));
}

double eff_random_bounds(const Vector& delta, const Matrix& sigma, const Matrix& m) {
    require_square(sigma, delta);
    require_square(m, delta);
    const Matrix r = inverse_sqrt(m);
    const double trace = (r * sigma * r).trace();
    require(trace > 0.0, ErrorKind::DegenerateProjection, "covariance has zero trace");
    return (r * delta).squaredNorm() / trace;
}

EfficiencyReport efficiency_report(const Vector& delta, const ErrorStructure& structure,
                                   const std::optional<Projection>& p) {
    const Matrix sigma = covariance(structure);
    require_square(sigma, delta);
    EfficiencyReport report;
    if (p) report.e1 = eff_projection(delta, *p, sigma);
    report.e_oracle = eff_oracle(delta, sigma);
    report.e2 = eff_panel(delta, sigma.diagonal());
    if (const auto* mixed = std::get_if<MixedComponents>(&structure.kind());
        mixed != nullptr && mixed->phi.squaredNorm() > 0.0) {
        const auto mis = eff_panel_misspecified(delta, mixed->s, mixed->phi);
        report.e3 = mis.e3;
        report.a_d = mis.a_d;
    }
    report.cone_halfangle =
        delta.size() >= 2 ? detection_cone(static_cast<std::size_t>(delta.size())) : 0.0;
    return report;
}

}  // namespace hdcp
