#include "hdcp/projection.hpp"

#include <cmath>
#include <string>

#include "hdcp/error.hpp"

namespace hdcp {

std::string_view to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::Oracle: return "oracle";
        case Provenance::PreOracle: return "pre-oracle";
        case Provenance::QuasiOracle: return "quasi-oracle";
        case Provenance::ScaledSearch: return "scaled-search";
        case Provenance::RandomUnit: return "random-unit";
        case Provenance::ScaledRandom: return "scaled-random";
        case Provenance::MisscaledOracle: return "misscaled-oracle";
        case Provenance::Custom: return "custom";
    }
    return "unknown";
}

Projection::Projection(Vector vector, Provenance provenance)
    : vector_(std::move(vector)), provenance_(provenance) {
    require(vector_.size() > 0, ErrorKind::InvalidArgument, "projection is empty");
    require(vector_.allFinite(), ErrorKind::InvalidArgument, "projection has non-finite entries");
    require(!vector_.isZero(0.0), ErrorKind::ZeroChange, "projection vector is identically zero");
}

namespace {

void require_square_symmetric(const Matrix& m) {
    require(m.rows() == m.cols() && m.rows() > 0, ErrorKind::DimensionMismatch,
            "matrix must be square and non-empty");
    require(m.allFinite(), ErrorKind::InvalidArgument, "matrix has non-finite entries");
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    require(asym <= 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()), ErrorKind::NotPositiveDefinite,
            "matrix is not symmetric");
}

Eigen::SelfAdjointEigenSolver<Matrix> spd_eigen(const Matrix& m, double relative_tol) {
    require_square_symmetric(m);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    require(eig.info() == Eigen::Success, ErrorKind::NotPositiveDefinite,
            "eigen decomposition failed");
    const double largest = eig.eigenvalues().maxCoeff();
    const double smallest = eig.eigenvalues().minCoeff();
    require(largest > 0.0 && smallest > relative_tol * largest, ErrorKind::NotPositiveDefinite,
            "smallest eigenvalue " + std::to_string(smallest) + " is not above tolerance");
    return eig;
}

void require_nonzero_change(const Vector& v) {
    require(v.size() > 0 && v.allFinite(), ErrorKind::InvalidArgument, "change vector is invalid");
    require(v.norm() > 0.0, ErrorKind::ZeroChange, "change vector is zero");
}

// Solve M x = b for SPD M (already validated).
Vector spd_solve(const Matrix& m, const Vector& b) {
    require(m.rows() == b.size(), ErrorKind::DimensionMismatch, "matrix/vector size mismatch");
    return m.llt().solve(b);
}

}  // namespace

void require_spd(const Matrix& m, double relative_tol) { (void)spd_eigen(m, relative_tol); }

Matrix inverse_sqrt(const Matrix& m, double relative_tol) {
    const auto eig = spd_eigen(m, relative_tol);
    const Matrix& v = eig.eigenvectors();
    Matrix r = v * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
    return 0.5 * (r + r.transpose());
}

Matrix sqrt_psd(const Matrix& m) {
    require_square_symmetric(m);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Matrix r = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
    return 0.5 * (r + r.transpose());
}

Projection oracle(const Matrix& sigma, const Vector& delta) {
    require_nonzero_change(delta);
    require_spd(sigma);
    return {spd_solve(sigma, delta), Provenance::Oracle};
}

Projection pre_oracle(const Vector& delta) {
    require_nonzero_change(delta);
    return {delta, Provenance::PreOracle};
}

Projection quasi_oracle(const Vector& variances, const Vector& delta) {
    require_nonzero_change(delta);
    require(variances.size() == delta.size(), ErrorKind::DimensionMismatch,
            "variances and delta differ in length");
    require((variances.array() > 0.0).all() && variances.allFinite(),
            ErrorKind::NonPositiveVariance, "quasi-oracle needs positive variances");
    return {delta.cwiseQuotient(variances), Provenance::QuasiOracle};
}

Projection random_unit(std::size_t d, Rng& rng) {
    require(d >= 1, ErrorKind::InvalidArgument, "random_unit needs d >= 1");
    Vector r(static_cast<Eigen::Index>(d));
    double norm = 0.0;
    do {
        for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = rng.normal();
        norm = r.norm();
    } while (norm == 0.0);
    return {r / norm, Provenance::RandomUnit};
}

Projection scaled_random(const Matrix& m, Rng& rng) {
    const Matrix root = inverse_sqrt(m);
    const Projection r = random_unit(static_cast<std::size_t>(m.rows()), rng);
    return {root * r.vector(), Provenance::ScaledRandom};
}

Projection scaled_search(const Matrix& m, const Vector& s) {
    require_nonzero_change(s);
    require_spd(m);
    return {spd_solve(m, s), Provenance::ScaledSearch};
}

Projection misscaled_oracle(const Matrix& m, const Vector& delta) {
    require_nonzero_change(delta);
    require_spd(m);
    return {spd_solve(m, delta), Provenance::MisscaledOracle};
}

Projection custom(Vector v) { return {std::move(v), Provenance::Custom}; }

}  // namespace hdcp
