#pragma once

#include <string_view>

#include "hdcp/model.hpp"
#include "hdcp/random.hpp"

namespace hdcp {

enum class Provenance {
    Oracle,
    PreOracle,
    QuasiOracle,
    ScaledSearch,
    RandomUnit,
    ScaledRandom,
    MisscaledOracle,
    Custom,
};

[[nodiscard]] std::string_view to_string(Provenance p) noexcept;

// A search direction. Statistics built on it are invariant to rescaling, so
// only the direction carries information.
class Projection {
public:
    Projection(Vector vector, Provenance provenance);

    [[nodiscard]] const Vector& vector() const noexcept { return vector_; }
    [[nodiscard]] Provenance provenance() const noexcept { return provenance_; }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(vector_.size()); }

private:
    Vector vector_;
    Provenance provenance_;
};

// Relative eigenvalue floor used by every SPD check.
inline constexpr double kSpdRelativeTolerance = 1e-12;

// M^{-1/2} by spectral decomposition. Throws NotPositiveDefinite when M is not
// symmetric (1e-10) or its smallest eigenvalue is <= tol * largest.
[[nodiscard]] Matrix inverse_sqrt(const Matrix& m, double relative_tol = kSpdRelativeTolerance);

// M^{1/2} for a symmetric PSD matrix (negative round-off eigenvalues clipped).
[[nodiscard]] Matrix sqrt_psd(const Matrix& m);

// Throws NotPositiveDefinite unless m is symmetric positive definite.
void require_spd(const Matrix& m, double relative_tol = kSpdRelativeTolerance);

[[nodiscard]] Projection oracle(const Matrix& sigma, const Vector& delta);
[[nodiscard]] Projection pre_oracle(const Vector& delta);
[[nodiscard]] Projection quasi_oracle(const Vector& variances, const Vector& delta);
[[nodiscard]] Projection random_unit(std::size_t d, Rng& rng);
[[nodiscard]] Projection scaled_random(const Matrix& m, Rng& rng);
[[nodiscard]] Projection scaled_search(const Matrix& m, const Vector& s);
// M^{-1} delta for an assumed covariance M.
[[nodiscard]] Projection misscaled_oracle(const Matrix& m, const Vector& delta);
[[nodiscard]] Projection custom(Vector v);

}  // namespace hdcp
