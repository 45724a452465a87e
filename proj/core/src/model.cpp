#include "hdcp/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdcp/error.hpp"

namespace hdcp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(const Vector& v, const char* name) {
    require(v.allFinite(), ErrorKind::InvalidArgument, std::string(name) + " has non-finite entries");
}

void require_positive(const Vector& v, const char* name) {
    require_finite(v, name);
    require(v.size() > 0, ErrorKind::InvalidArgument, std::string(name) + " is empty");
    require((v.array() > 0.0).all(), ErrorKind::InvalidArgument,
            std::string(name) + " must be strictly positive");
}

}  // namespace

// ---------------------------------------------------------------------------

SignalShape SignalShape::amoc(double theta) {
    require(theta > 0.0 && theta < 1.0, ErrorKind::InvalidArgument, "AMOC theta must lie in (0,1)");
    return SignalShape(AmocShape{theta});
}

SignalShape SignalShape::epidemic(double theta1, double theta2) {
    require(theta1 >= 0.0 && theta2 <= 1.0 && theta1 < theta2, ErrorKind::InvalidArgument,
            "epidemic needs 0 <= theta1 < theta2 <= 1");
    return SignalShape(EpidemicShape{theta1, theta2});
}

SignalShape SignalShape::tabulated(std::vector<double> values) {
    require(!values.empty(), ErrorKind::InvalidArgument, "tabulated shape needs values");
    require(std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }),
            ErrorKind::InvalidArgument, "tabulated shape values must be finite");
    return SignalShape(TabulatedShape{std::move(values)});
}

SignalShape SignalShape::constant(double level) { return tabulated({level}); }

double SignalShape::operator()(double u) const {
    return std::visit(
        overloaded{
            [u](const AmocShape& s) { return u > s.theta ? 1.0 : 0.0; },
            [u](const EpidemicShape& s) { return (u > s.theta1 && u < s.theta2) ? 1.0 : 0.0; },
            [u](const TabulatedShape& s) {
                const auto n = static_cast<double>(s.values.size());
                auto k = static_cast<long>(std::ceil(u * n - 1e-9));
                k = std::clamp<long>(k, 1, static_cast<long>(s.values.size()));
                return s.values[static_cast<std::size_t>(k - 1)];
            },
        },
        kind_);
}

std::vector<double> drift_curve(const SignalShape& shape, std::size_t grid) {
    require(grid >= 2, ErrorKind::InvalidArgument, "drift_curve needs grid >= 2");
    const double n = static_cast<double>(grid);
    std::vector<double> partial(grid + 1, 0.0);
    for (std::size_t t = 1; t <= grid; ++t) {
        partial[t] = partial[t - 1] + shape(static_cast<double>(t) / n) / n;
    }
    std::vector<double> h(grid + 1);
    for (std::size_t k = 0; k <= grid; ++k) {
        h[k] = partial[k] - (static_cast<double>(k) / n) * partial[grid];
    }
    h[grid] = 0.0;
    return h;
}

// ---------------------------------------------------------------------------

ErrorStructure::ErrorStructure(Kind kind, InnovationLaw innovations)
    : kind_(std::move(kind)), innovations_(std::move(innovations)) {
    std::visit(overloaded{
                   [this](const IndependentComponents& c) {
                       require_positive(c.s, "s");
                       dim_ = static_cast<std::size_t>(c.s.size());
                   },
                   [this](const FullyDependent& c) {
                       require_finite(c.phi, "phi");
                       require(c.phi.size() > 0, ErrorKind::InvalidArgument, "phi is empty");
                       dim_ = static_cast<std::size_t>(c.phi.size());
                   },
                   [this](const MixedComponents& c) {
                       require_positive(c.s, "s");
                       require_finite(c.phi, "phi");
                       require(c.s.size() == c.phi.size(), ErrorKind::DimensionMismatch,
                               "s and phi differ in length");
                       dim_ = static_cast<std::size_t>(c.s.size());
                   },
                   [this](const GeneralLinear& c) {
                       require(c.loadings.rows() > 0 && c.loadings.cols() > 0,
                               ErrorKind::InvalidArgument, "loadings matrix is empty");
                       require(c.loadings.allFinite(), ErrorKind::InvalidArgument,
                               "loadings have non-finite entries");
                       dim_ = static_cast<std::size_t>(c.loadings.rows());
                   },
               },
               kind_);
}

ErrorStructure ErrorStructure::independent(Vector s) {
    return ErrorStructure(IndependentComponents{std::move(s)});
}
ErrorStructure ErrorStructure::fully_dependent(Vector phi) {
    return ErrorStructure(FullyDependent{std::move(phi)});
}
ErrorStructure ErrorStructure::mixed(Vector s, Vector phi) {
    return ErrorStructure(MixedComponents{std::move(s), std::move(phi)});
}
ErrorStructure ErrorStructure::general(Matrix loadings) {
    return ErrorStructure(GeneralLinear{std::move(loadings)});
}

Vector ErrorStructure::variances() const {
    return std::visit(
        overloaded{
            [](const IndependentComponents& c) -> Vector { return c.s.array().square(); },
            [](const FullyDependent& c) -> Vector { return c.phi.array().square(); },
            [](const MixedComponents& c) -> Vector {
                return c.s.array().square() + c.phi.array().square();
            },
            [](const GeneralLinear& c) -> Vector { return c.loadings.rowwise().squaredNorm(); },
        },
        kind_);
}

void ErrorStructure::draw(Rng& rng, Eigen::Ref<Vector> out) const {
    std::visit(overloaded{
                   [&](const IndependentComponents& c) {
                       for (Eigen::Index i = 0; i < c.s.size(); ++i) out[i] = c.s[i] * innovation(rng);
                   },
                   [&](const FullyDependent& c) { out = c.phi * innovation(rng); },
                   [&](const MixedComponents& c) {
                       for (Eigen::Index i = 0; i < c.s.size(); ++i) out[i] = c.s[i] * innovation(rng);
                       out += c.phi * innovation(rng);
                   },
                   [&](const GeneralLinear& c) {
                       out.setZero();
                       for (Eigen::Index j = 0; j < c.loadings.cols(); ++j) {
                           out += c.loadings.col(j) * innovation(rng);
                       }
                   },
               },
               kind_);
}

Matrix covariance(const ErrorStructure& structure) {
    return std::visit(
        overloaded{
            [](const IndependentComponents& c) -> Matrix {
                return c.s.array().square().matrix().asDiagonal();
            },
            [](const FullyDependent& c) -> Matrix { return c.phi * c.phi.transpose(); },
            [](const MixedComponents& c) -> Matrix {
                Matrix sigma = c.phi * c.phi.transpose();
                sigma.diagonal().array() += c.s.array().square();
                return sigma;
            },
            [](const GeneralLinear& c) -> Matrix { return c.loadings * c.loadings.transpose(); },
        },
        structure.kind());
}

// ---------------------------------------------------------------------------

PanelSeries::PanelSeries(Matrix data) : data_(std::move(data)) {
    require(data_.rows() >= 1, ErrorKind::InvalidArgument, "panel needs d >= 1");
    require(data_.cols() >= 2, ErrorKind::InvalidArgument, "panel needs T >= 2");
    require(data_.allFinite(), ErrorKind::InvalidArgument, "panel has non-finite entries");
}

PanelSeries PanelSeries::window(std::size_t begin, std::size_t end) const {
    require(begin < end && end <= length(), ErrorKind::InvalidArgument, "window out of range");
    return PanelSeries(data_.middleCols(static_cast<Eigen::Index>(begin),
                                        static_cast<Eigen::Index>(end - begin)));
}

Vector PanelSeries::project(const Vector& p) const {
    require(static_cast<std::size_t>(p.size()) == dim(), ErrorKind::DimensionMismatch,
            "projection length " + std::to_string(p.size()) + " != panel dimension " +
                std::to_string(dim()));
    return data_.transpose() * p;
}

Matrix mean_path(const ChangeSpec& spec, std::size_t d, std::size_t T) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(T));
    if (spec.mu.size() > 0) m.colwise() += spec.mu;
    if (spec.delta.size() > 0) {
        for (std::size_t t = 1; t <= T; ++t) {
            const double g = spec.shape(static_cast<double>(t) / static_cast<double>(T));
            if (g != 0.0) m.col(static_cast<Eigen::Index>(t - 1)) += g * spec.delta;
        }
    }
    return m;
}

PanelSeries generate(const ChangeSpec& spec, const ErrorStructure& structure, std::size_t T,
                     Rng& rng) {
    require(T >= 2, ErrorKind::InvalidArgument, "generate needs T >= 2");
    const std::size_t d = structure.dim();
    require(spec.delta.size() == 0 || static_cast<std::size_t>(spec.delta.size()) == d,
            ErrorKind::DimensionMismatch, "delta length does not match the error structure");
    require(spec.mu.size() == 0 || static_cast<std::size_t>(spec.mu.size()) == d,
            ErrorKind::DimensionMismatch, "mu length does not match the error structure");
    require(spec.delta.allFinite() && spec.mu.allFinite(), ErrorKind::InvalidArgument,
            "change specification has non-finite entries");

    Matrix x = mean_path(spec, d, T);
    Vector e(static_cast<Eigen::Index>(d));
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
        structure.draw(rng, e);
        x.col(t) += e;
    }
    return PanelSeries(std::move(x));
}

PanelSeries generate(const ChangeSpec& spec, const ErrorStructure& structure, std::size_t T,
                     std::uint64_t seed) {
    Rng rng(seed);
    return generate(spec, structure, T, rng);
}

}  // namespace hdcp
