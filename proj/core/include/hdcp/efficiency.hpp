#pragma once

// Closed-form high-dimensional efficiencies of the projection and panel tests.

#include <cstddef>
#include <optional>

#include "hdcp/model.hpp"
#include "hdcp/projection.hpp"

namespace hdcp {

// |<delta, p>| / tau(p)
[[nodiscard]] double eff_projection(const Vector& delta, const Projection& p, const Matrix& sigma);

// ||Sigma^{-1/2} delta||, the efficiency of the oracle Sigma^{-1} delta.
[[nodiscard]] double eff_oracle(const Vector& delta, const Matrix& sigma);

// Oracle efficiency for Sigma = diag(s^2) + phi phi^T with delta parallel to phi.
// Throws NotProportional unless |cos(delta, phi)| >= 1 - 1e-10.
[[nodiscard]] double eff_mixed_oracle(const Vector& delta, const Vector& s, const Vector& phi);

// d^{-1/4} sqrt(sum delta_i^2 / sigma_i^2)
[[nodiscard]] double eff_panel(const Vector& delta, const Vector& variances);

struct MisspecifiedPanel {
    double e3;
    double a_d;  // sum phi_i^2 / sigma_i^2
};

// Panel efficiency under a common factor. Throws ZeroDependence when
// A_d <= 1e-14; the independent-panel efficiency then applies.
[[nodiscard]] MisspecifiedPanel eff_panel_misspecified(const Vector& delta, const Vector& s,
                                                       const Vector& phi);

// Half-angle arccos(d^{-1/4}) of the cone, measured between Sigma^{1/2} p and
// Sigma^{-1/2} delta, inside which a projection beats the panel statistic.
[[nodiscard]] double detection_cone(std::size_t d);

// Angle between Sigma^{1/2} p and Sigma^{-1/2} delta, in [0, pi/2].
[[nodiscard]] double projection_angle(const Vector& delta, const Projection& p, const Matrix& sigma);

// ||M^{-1/2} delta||^2 / tr(M^{-1/2} Sigma M^{-1/2}): the scale of the squared
// efficiency of a random projection built with assumed covariance M.
[[nodiscard]] double eff_random_bounds(const Vector& delta, const Matrix& sigma, const Matrix& m);

struct EfficiencyReport {
    std::optional<double> e1;
    double e_oracle = 0.0;
    double e2 = 0.0;
    std::optional<double> e3;
    std::optional<double> a_d;
    double cone_halfangle = 0.0;
};

// e1 is filled when a projection is given, e3 and A_d when the covariance is a
// mixed factor model with nonzero phi. e2 uses the diagonal of Sigma.
[[nodiscard]] EfficiencyReport efficiency_report(const Vector& delta, const ErrorStructure& structure,
                                                 const std::optional<Projection>& p = std::nullopt);

}  // namespace hdcp
