#pragma once

// Data-generating model: X_{i,t} = mu_i + delta_i * g(t/T) + e_{i,t}, with the
// errors e_t drawn i.i.d. over time from a linear factor model.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hdcp/random.hpp"

namespace hdcp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Signal shapes g : [0,1] -> R
// ---------------------------------------------------------------------------

struct AmocShape {
    double theta;  // g(u) = 1 for u > theta
};

struct EpidemicShape {
    double theta1;  // g(u) = 1 on the open interval (theta1, theta2)
    double theta2;
};

// Step function through values[k-1] on ((k-1)/n, k/n].
struct TabulatedShape {
    std::vector<double> values;
};

class SignalShape {
public:
    static SignalShape amoc(double theta);
    static SignalShape epidemic(double theta1, double theta2);
    static SignalShape tabulated(std::vector<double> values);
    static SignalShape constant(double level = 1.0);

    [[nodiscard]] double operator()(double u) const;

    [[nodiscard]] const auto& kind() const noexcept { return kind_; }

private:
    using Kind = std::variant<AmocShape, EpidemicShape, TabulatedShape>;
    explicit SignalShape(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

// H(x) = int_0^x g - x int_0^1 g at x = k/grid, k = 0..grid, using the left
// Riemann sums (1/grid) sum_{t<=k} g(t/grid) that the CUSUM statistics see.
[[nodiscard]] std::vector<double> drift_curve(const SignalShape& shape, std::size_t grid);

// ---------------------------------------------------------------------------
// Error structures
// ---------------------------------------------------------------------------

struct IndependentComponents {
    Vector s;  // loadings s_j > 0; Sigma = diag(s^2)
};

struct FullyDependent {
    Vector phi;  // Sigma = phi phi^T (rank one)
};

struct MixedComponents {
    Vector s;    // s_j > 0
    Vector phi;  // Sigma = diag(s^2) + phi phi^T
};

// Finitely many factors; column j of `loadings` is a_j. Sigma = A A^T.
struct GeneralLinear {
    Matrix loadings;
};

// Zero-mean, unit-variance innovation sampler. The moment condition
// E|eta|^nu < inf for some nu > 2 is the caller's responsibility.
using InnovationLaw = std::function<double(Rng&)>;

class ErrorStructure {
public:
    using Kind = std::variant<IndependentComponents, FullyDependent, MixedComponents, GeneralLinear>;

    explicit ErrorStructure(Kind kind, InnovationLaw innovations = {});

    static ErrorStructure independent(Vector s);
    static ErrorStructure fully_dependent(Vector phi);
    static ErrorStructure mixed(Vector s, Vector phi);
    static ErrorStructure general(Matrix loadings);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
    [[nodiscard]] bool has_custom_innovations() const noexcept {
        return static_cast<bool>(innovations_);
    }

    // Component variances sigma_j^2 = diag(Sigma).
    [[nodiscard]] Vector variances() const;

    // Fills `out` (length dim()) with one error vector e_t.
    void draw(Rng& rng, Eigen::Ref<Vector> out) const;

private:
    double innovation(Rng& rng) const { return innovations_ ? innovations_(rng) : rng.normal(); }

    Kind kind_;
    InnovationLaw innovations_;
    std::size_t dim_ = 0;
};

// Sigma = sum_j a_j a_j^T in the closed form of each case.
[[nodiscard]] Matrix covariance(const ErrorStructure& structure);

// ---------------------------------------------------------------------------
// Change specification and panels
// ---------------------------------------------------------------------------

struct ChangeSpec {
    Vector delta;  // per-component change; all zeros is the null hypothesis
    SignalShape shape = SignalShape::amoc(0.5);
    Vector mu;     // baseline means; empty means zero

    [[nodiscard]] bool is_null() const { return delta.size() == 0 || delta.isZero(0.0); }
};

// d x T matrix; column t is the observation vector X_t.
class PanelSeries {
public:
    explicit PanelSeries(Matrix data);

    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    [[nodiscard]] std::size_t length() const noexcept {
        return static_cast<std::size_t>(data_.cols());
    }
    [[nodiscard]] const Matrix& data() const noexcept { return data_; }

    // Columns [begin, end) as a new panel.
    [[nodiscard]] PanelSeries window(std::size_t begin, std::size_t end) const;

    // <X_t, p> for t = 1..T.
    [[nodiscard]] Vector project(const Vector& p) const;

private:
    Matrix data_;
};

[[nodiscard]] PanelSeries generate(const ChangeSpec& spec, const ErrorStructure& structure,
                                   std::size_t T, Rng& rng);
[[nodiscard]] PanelSeries generate(const ChangeSpec& spec, const ErrorStructure& structure,
                                   std::size_t T, std::uint64_t seed);

// Deterministic part mu_i + delta_i g(t/T).
[[nodiscard]] Matrix mean_path(const ChangeSpec& spec, std::size_t d, std::size_t T);

}  // namespace hdcp
