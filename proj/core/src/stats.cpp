#include "hdcp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hdcp/error.hpp"

namespace hdcp {

namespace {

constexpr double kZeroVarianceFloor = 1e-14;

void require_normalizer(const CusumProcess& u) {
    require(u.normalizer > 0.0 && std::isfinite(u.normalizer), ErrorKind::ZeroVariance,
            "CUSUM normalizer must be positive");
    require(u.length() >= 2, ErrorKind::InvalidArgument, "CUSUM process needs T >= 2");
}

double centred_sum_of_squares(const double* y, std::size_t n) {
    if (n == 0) return 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += y[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (y[i] - mean) * (y[i] - mean);
    return ss;
}

double checked_sqrt(double variance, const char* what) {
    require(variance > kZeroVarianceFloor, ErrorKind::ZeroVariance,
            std::string(what) + " variance estimate is degenerate");
    return std::sqrt(variance);
}

}  // namespace

CusumProcess cusum(std::span<const double> y, CusumKind kind) {
    const std::size_t n = y.size();
    require(n >= 2, ErrorKind::InvalidArgument, "CUSUM needs T >= 2");
    double total = 0.0;
    for (double v : y) total += v;
    const double big_t = static_cast<double>(n);
    const double scale = 1.0 / std::sqrt(big_t);

    CusumProcess u;
    u.kind = kind;
    u.values.resize(static_cast<Eigen::Index>(n));
    double partial = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        partial += y[k - 1];
        u.values[static_cast<Eigen::Index>(k - 1)] =
            scale * (partial - (static_cast<double>(k) / big_t) * total);
    }
    u.values[static_cast<Eigen::Index>(n - 1)] = 0.0;
    return u;
}

CusumProcess cusum(const Vector& y, CusumKind kind) {
    return cusum(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), kind);
}

CusumProcess projected_cusum(const PanelSeries& x, const Projection& p) {
    return cusum(x.project(p.vector()), CusumKind::Projected);
}

CusumProcess with_normalizer(CusumProcess u, double normalizer) {
    u.normalizer = normalizer;
    return u;
}

double tau(const Projection& p, const Matrix& sigma) {
    require(sigma.rows() == sigma.cols() && static_cast<std::size_t>(sigma.rows()) == p.dim(),
            ErrorKind::DimensionMismatch, "covariance does not match projection length");
    const double q = p.vector().dot(sigma * p.vector());
    const double tol = 1e-14 * p.vector().squaredNorm() * std::max(1.0, sigma.cwiseAbs().maxCoeff());
    require(q > tol, ErrorKind::DegenerateProjection, "projected noise variance is not positive");
    return std::sqrt(q);
}

double tau_hat1(const Vector& y) {
    const auto n = static_cast<std::size_t>(y.size());
    require(n >= 3, ErrorKind::InvalidArgument, "variance estimation needs T >= 3");
    return checked_sqrt(centred_sum_of_squares(y.data(), n) / static_cast<double>(n), "tau_hat1");
}

std::size_t split_index(const CusumProcess& u) {
    std::size_t best = 1;
    double best_value = -1.0;
    for (std::size_t k = 1; k <= u.length(); ++k) {
        const double v = std::abs(u.values[static_cast<Eigen::Index>(k - 1)]);
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    return best;
}

double tau_hat2(const Vector& y, const CusumProcess& u) {
    const auto n = static_cast<std::size_t>(y.size());
    require(n >= 3, ErrorKind::InvalidArgument, "variance estimation needs T >= 3");
    require(u.length() == n, ErrorKind::DimensionMismatch, "CUSUM and series lengths differ");
    const std::size_t k = split_index(u);
    const double ss =
        centred_sum_of_squares(y.data(), k) + centred_sum_of_squares(y.data() + k, n - k);
    return checked_sqrt(ss / static_cast<double>(n), "tau_hat2");
}

double tau_hat2(const Vector& y) { return tau_hat2(y, cusum(y)); }

WeightFunction::WeightFunction(double beta) : beta_(beta) {
    require(beta >= 0.0 && beta < 0.5, ErrorKind::InvalidArgument, "weight exponent must lie in [0, 1/2)");
}

double WeightFunction::operator()(double t) const {
    if (beta_ == 0.0) return 1.0;
    return std::pow(t * (1.0 - t), -beta_);
}

double amoc_statistic(const CusumProcess& u, const WeightFunction& w, AmocMode mode) {
    require_normalizer(u);
    const std::size_t n = u.length();
    const double big_t = static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double t = static_cast<double>(k) / big_t;
        const double a = std::abs(u.values[static_cast<Eigen::Index>(k - 1)]) / u.normalizer;
        switch (mode) {
            case AmocMode::Max: acc = std::max(acc, w(t) * a); break;
            case AmocMode::Sum: acc += w(t) * a; break;
            case AmocMode::SumSquared: {
                const double wa = w(t) * a;
                acc += wa * wa;
                break;
            }
        }
    }
    return mode == AmocMode::Max ? acc : acc / big_t;
}

double epidemic_statistic(const CusumProcess& u, EpidemicMode mode) {
    require_normalizer(u);
    const std::size_t n = u.length();
    if (mode == EpidemicMode::Max) {
        const double range = u.values.maxCoeff() - u.values.minCoeff();
        return range / u.normalizer;
    }
    // sum_{i<j} |a_j - a_i| over sorted values = sum_i a_(i) (2i - n + 1)
    std::vector<double> sorted(u.values.data(), u.values.data() + n);
    std::sort(sorted.begin(), sorted.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += sorted[i] * (2.0 * static_cast<double>(i) - static_cast<double>(n) + 1.0);
    }
    const double big_t = static_cast<double>(n);
    return acc / (big_t * big_t) / u.normalizer;
}

std::size_t changepoint_index(const CusumProcess& u, const WeightFunction& w, std::size_t first,
                              std::size_t last) {
    const std::size_t n = u.length();
    require(n >= 2, ErrorKind::InvalidArgument, "CUSUM process needs T >= 2");
    if (last == 0) last = n - 1;
    require(first >= 1 && first <= last && last <= n - 1, ErrorKind::InvalidArgument,
            "changepoint search range is empty");
    const double big_t = static_cast<double>(n);
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
        const double wu = w(static_cast<double>(k) / big_t) * u.values[static_cast<Eigen::Index>(k - 1)];
        const double v = wu * wu;
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    require(best != 0, ErrorKind::AllZero, "CUSUM process vanishes on the search range");
    return best;
}

double changepoint_estimate(const CusumProcess& u, const WeightFunction& w) {
    return static_cast<double>(changepoint_index(u, w)) / static_cast<double>(u.length());
}

Vector panel_cusum(const PanelSeries& x, const Vector& variances) {
    const std::size_t d = x.dim();
    const std::size_t n = x.length();
    require(static_cast<std::size_t>(variances.size()) == d, ErrorKind::DimensionMismatch,
            "variances length does not match panel dimension");
    require(variances.allFinite() && (variances.array() > 0.0).all(), ErrorKind::NonPositiveVariance,
            "panel statistic needs positive variances");

    const Matrix& data = x.data();
    const double big_t = static_cast<double>(n);
    const Vector totals = data.rowwise().sum();
    const Vector inv_var = variances.cwiseInverse();

    Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
    Vector partial = Vector::Zero(static_cast<Eigen::Index>(d));
    const double root_d = std::sqrt(static_cast<double>(d));
    for (std::size_t k = 1; k < n; ++k) {
        partial += data.col(static_cast<Eigen::Index>(k - 1));
        const double frac = static_cast<double>(k) / big_t;
        // Z_i^2 = (S_ik - frac * S_iT)^2 / T
        const Vector z = partial - frac * totals;
        const double quad = z.cwiseAbs2().dot(inv_var) / big_t;
        const double centring = static_cast<double>(d) * frac * (1.0 - frac);
        v[static_cast<Eigen::Index>(k - 1)] = (quad - centring) / root_d;
    }
    return v;
}

double panel_statistic(const Vector& v, PanelMode mode) {
    const auto n = static_cast<std::size_t>(v.size());
    require(n >= 2, ErrorKind::InvalidArgument, "panel process needs T >= 2");
    const auto interior = v.head(static_cast<Eigen::Index>(n - 1));
    if (mode == PanelMode::Max) return interior.maxCoeff();
    return interior.sum() / static_cast<double>(n);
}

Vector component_variances(const PanelSeries& x, VarianceMethod method) {
    require(x.length() >= 3, ErrorKind::InvalidArgument, "variance estimation needs T >= 3");
    Vector out(static_cast<Eigen::Index>(x.dim()));
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const Vector row = x.data().row(i).transpose();
        const double s = method == VarianceMethod::Naive ? tau_hat1(row) : tau_hat2(row);
        out[i] = s * s;
    }
    return out;
}

}  // namespace hdcp
