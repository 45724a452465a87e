#pragma once

// CUSUM processes, variance estimators and the AMOC / epidemic / panel test
// statistics built from them.

#include <cstddef>
#include <optional>
#include <span>

#include "hdcp/model.hpp"
#include "hdcp/projection.hpp"

namespace hdcp {

enum class CusumKind { Projected, ComponentZ };

// values[k-1] = U(k/T) for k = 1..T, so values[T-1] == 0. The statistics
// divide by `normalizer` (tau or an estimate of it).
struct CusumProcess {
    Vector values;
    double normalizer = 1.0;
    CusumKind kind = CusumKind::Projected;

    [[nodiscard]] std::size_t length() const noexcept {
        return static_cast<std::size_t>(values.size());
    }
};

// U(k/T) = T^{-1/2} (sum_{t<=k} y_t - (k/T) sum_t y_t) for a univariate series.
[[nodiscard]] CusumProcess cusum(std::span<const double> y, CusumKind kind = CusumKind::ComponentZ);
[[nodiscard]] CusumProcess cusum(const Vector& y, CusumKind kind = CusumKind::ComponentZ);

[[nodiscard]] CusumProcess projected_cusum(const PanelSeries& x, const Projection& p);

[[nodiscard]] CusumProcess with_normalizer(CusumProcess u, double normalizer);

// tau(p) = sqrt(p^T Sigma p). Throws DegenerateProjection when the projected
// noise variance is not positive.
[[nodiscard]] double tau(const Projection& p, const Matrix& sigma);

// Square roots of the global centred second moment (tau_hat1) and of the
// pooled second moment after splitting at argmax_k |U(k/T)| (tau_hat2). Both
// throw ZeroVariance when the squared estimate is <= 1e-14.
[[nodiscard]] double tau_hat1(const Vector& y);
[[nodiscard]] double tau_hat2(const Vector& y, const CusumProcess& u);
[[nodiscard]] double tau_hat2(const Vector& y);

// Smallest k in 1..T maximising |U(k/T)|.
[[nodiscard]] std::size_t split_index(const CusumProcess& u);

class WeightFunction {
public:
    explicit WeightFunction(double beta = 0.0);

    [[nodiscard]] double beta() const noexcept { return beta_; }
    // (t(1-t))^{-beta}
    [[nodiscard]] double operator()(double t) const;

private:
    double beta_;
};

enum class AmocMode {
    Max,         // max_k w |U| / tau
    Sum,         // T^{-1} sum_k w |U| / tau
    SumSquared,  // T^{-1} sum_k w^2 U^2 / tau^2
};

enum class EpidemicMode { Max, Sum };
enum class PanelMode { Max, Int };

// k ranges over 1..T-1; k = T is excluded since U(1) = 0 and w(1) may be infinite.
[[nodiscard]] double amoc_statistic(const CusumProcess& u, const WeightFunction& w, AmocMode mode);

// Pairs 1 <= k1 < k2 <= T.
[[nodiscard]] double epidemic_statistic(const CusumProcess& u, EpidemicMode mode);

// argmax_k w^2(k/T) U^2(k/T) over k in [first, last] (default 1..T-1), smallest
// index on ties. Throws AllZero when U vanishes on the range.
[[nodiscard]] std::size_t changepoint_index(const CusumProcess& u, const WeightFunction& w,
                                            std::size_t first = 1, std::size_t last = 0);
// The same argmax in rescaled time k/T.
[[nodiscard]] double changepoint_estimate(const CusumProcess& u, const WeightFunction& w);

// V(k/T) = d^{-1/2} sum_i (Z_{T,i}^2(k/T) / sigma_i^2 - k(T-k)/T^2) for
// k = 1..T (the last entry is 0).
[[nodiscard]] Vector panel_cusum(const PanelSeries& x, const Vector& variances);

// Max over k = 1..T-1, or the Riemann sum T^{-1} sum_{k<T} V(k/T).
[[nodiscard]] double panel_statistic(const Vector& v, PanelMode mode);

enum class VarianceMethod { Naive, SplitAtArgmax };

// Per-row tau_hat1^2 or tau_hat2^2.
[[nodiscard]] Vector component_variances(const PanelSeries& x, VarianceMethod method);

struct TestResult {
    double statistic = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
    std::optional<double> estimated_changepoint;  // rescaled time k/T
    std::optional<std::size_t> changepoint_index;  // k, 1-based
};

}  // namespace hdcp
