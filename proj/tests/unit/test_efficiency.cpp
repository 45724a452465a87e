#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <hdcp/efficiency.hpp>
#include <hdcp/error.hpp>
#include <hdcp/random.hpp>

using namespace hdcp;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception";
    return ErrorKind::InvalidArgument;
}

Matrix random_spd(std::size_t d, Rng& rng) {
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    return a * a.transpose() + 0.1 * Matrix::Identity(d, d);
}

Vector random_vec(std::size_t d, Rng& rng) {
    Vector v(d);
    for (auto& x : v) x = rng.normal();
    return v;
}

}  // namespace

TEST(EffProjection, Examples) {
    const Matrix id = Matrix::Identity(2, 2);
    EXPECT_DOUBLE_EQ(eff_projection(vec({1, 0}), custom(vec({1, 0})), id), 1.0);
    EXPECT_DOUBLE_EQ(eff_projection(vec({1, 0}), custom(vec({0, 1})), id), 0.0);
    EXPECT_NEAR(eff_projection(vec({1, 1}), custom(vec({1, 0})), id), std::sqrt(2.0) * std::cos(std::numbers::pi / 4),
                1e-15);
    Matrix singular = Matrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    EXPECT_EQ(kind_of([&] { (void)eff_projection(vec({1, 1}), custom(vec({0, 1})), singular); }),
              ErrorKind::DegenerateProjection);
}

TEST(EffOracle, Examples) {
    EXPECT_DOUBLE_EQ(eff_oracle(vec({2}), Matrix::Constant(1, 1, 4.0)), 1.0);
    EXPECT_NEAR(eff_oracle(vec({3, 4}), Matrix::Identity(2, 2)), 5.0, 1e-14);
    Matrix s(2, 2);
    s << 2, 1, 1, 2;
    EXPECT_NEAR(eff_oracle(vec({1, 1}), s), std::sqrt(2.0 / 3.0), 1e-14);
    Matrix bad(2, 2);
    bad << 1, 2, 2, 1;
    EXPECT_EQ(kind_of([&] { (void)eff_oracle(vec({1, 1}), bad); }), ErrorKind::NotPositiveDefinite);
}

TEST(EffOracle, OracleProjectionAttainsIt) {
    Rng rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t d = 2 + static_cast<std::size_t>(rep % 7);
        const Matrix sigma = random_spd(d, rng);
        const Vector delta = random_vec(d, rng);
        const double e = eff_oracle(delta, sigma);
        EXPECT_NEAR(eff_projection(delta, oracle(sigma, delta), sigma), e, 1e-9 * e);
        EXPECT_LE(eff_projection(delta, custom(random_vec(d, rng)), sigma), e + 1e-10);
    }
}

TEST(EffMixedOracle, Examples) {
    EXPECT_NEAR(eff_mixed_oracle(vec({1, 1}), vec({1, 1}), vec({1, 1})), std::sqrt(2.0 / 3.0), 1e-14);
    EXPECT_NEAR(eff_mixed_oracle(vec({2, 4}), vec({1, 2}), vec({1, 2})), std::sqrt(8.0 / 3.0), 1e-14);
    EXPECT_EQ(kind_of([] { (void)eff_mixed_oracle(vec({1, 0}), vec({1, 1}), vec({1, 1})); }),
              ErrorKind::NotProportional);
    EXPECT_EQ(kind_of([] { (void)eff_mixed_oracle(vec({1, 1}), vec({1, 1}), vec({0, 0})); }),
              ErrorKind::NotProportional);
}

TEST(EffMixedOracle, MatchesGeneralOracle) {
    Rng rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t d = 2 + static_cast<std::size_t>(rep % 9);
        const Vector s = (random_vec(d, rng).array().abs() + 0.2).matrix();
        const Vector phi = random_vec(d, rng);
        const double k = rng.normal();
        const Matrix sigma = Matrix(s.array().square().matrix().asDiagonal()) + phi * phi.transpose();
        const double a = eff_mixed_oracle(k * phi, s, phi);
        EXPECT_NEAR(a, eff_oracle(k * phi, sigma), 1e-10 * std::max(1.0, a));
    }
}

TEST(EffPanel, Examples) {
    EXPECT_DOUBLE_EQ(eff_panel(vec({1}), vec({1})), 1.0);
    Vector delta = Vector::Zero(16);
    delta[3] = 1.0;
    EXPECT_NEAR(eff_panel(delta, Vector::Ones(16)), 0.5, 1e-15);
    const Vector var = vec({1, 2, 3, 4, 5});
    const Vector d5 = vec({0.3, -1, 2, 0, 0.5});
    EXPECT_NEAR(eff_panel(d5, var), std::pow(5.0, -0.25) * eff_oracle(d5, Matrix(var.asDiagonal())), 1e-14);
    EXPECT_EQ(kind_of([] { (void)eff_panel(vec({1, 1}), vec({1, 0})); }), ErrorKind::NonPositiveVariance);
}

TEST(EffPanelMisspecified, Examples) {
    const auto a = eff_panel_misspecified(vec({0.5, 0.5, 0.5, 0.5}), Vector::Ones(4), Vector::Ones(4));
    EXPECT_NEAR(a.a_d, 2.0, 1e-15);
    EXPECT_NEAR(a.e3, 0.5, 1e-15);
    const auto b = eff_panel_misspecified(vec({0.5, 0.5, 0.5, 0.5}), Vector::Ones(4), Vector::Constant(4, 2.0));
    EXPECT_NEAR(b.a_d, 3.2, 1e-14);
    EXPECT_NEAR(b.e3, 0.25, 1e-15);
    EXPECT_EQ(kind_of([] { (void)eff_panel_misspecified(vec({1, 1}), vec({1, 1}), vec({0, 0})); }),
              ErrorKind::ZeroDependence);
}

TEST(DetectionCone, Examples) {
    EXPECT_NEAR(detection_cone(16), std::numbers::pi / 3, 1e-15);
    EXPECT_NEAR(detection_cone(2), std::acos(std::pow(2.0, -0.25)), 1e-15);
    EXPECT_GT(detection_cone(100000000), std::numbers::pi / 2 - 0.02);
    EXPECT_THROW((void)detection_cone(1), Error);
}

TEST(DetectionCone, ProjectionBeatsPanelInsideCone) {
    const std::size_t d = 16;
    const Vector delta = Vector::Ones(d) / 4.0;
    const Matrix id = Matrix::Identity(d, d);
    Vector other = Vector::Zero(d);
    other[0] = 1.0;
    other[1] = -1.0;
    other.normalize();
    const double e2 = eff_panel(delta, Vector::Ones(d));
    for (double angle : {0.2, 0.9, 1.2, 1.3}) {
        const Vector p = std::cos(angle) * delta.normalized() + std::sin(angle) * other;
        EXPECT_NEAR(projection_angle(delta, custom(p), id), angle, 1e-12);
        const bool inside = angle < detection_cone(d);
        EXPECT_EQ(eff_projection(delta, custom(p), id) > e2, inside) << angle;
    }
}

TEST(EffRandomBounds, Examples) {
    const Matrix id4 = Matrix::Identity(4, 4);
    EXPECT_NEAR(eff_random_bounds(vec({1, 0, 0, 0}), id4, id4), 0.25, 1e-15);
    Matrix sigma(2, 2);
    sigma << 2, 1, 1, 2;
    EXPECT_NEAR(eff_random_bounds(vec({1, 0}), sigma, Matrix::Identity(2, 2)), 0.25, 1e-15);
    Rng rng(8);
    const Matrix s = random_spd(5, rng);
    const Vector delta = random_vec(5, rng);
    EXPECT_NEAR(eff_random_bounds(delta, s, s), std::pow(eff_oracle(delta, s), 2) / 5.0, 1e-10);
    EXPECT_EQ(kind_of([&] { (void)eff_random_bounds(delta, s, -s); }), ErrorKind::NotPositiveDefinite);
}

TEST(EfficiencyReport, Fields) {
    const auto structure = ErrorStructure::mixed(Vector::Ones(4), Vector::Ones(4));
    const Vector delta = vec({0.5, 0.5, 0.5, 0.5});
    const auto r = efficiency_report(delta, structure, pre_oracle(delta));
    ASSERT_TRUE(r.e1 && r.e3 && r.a_d);
    EXPECT_LE(*r.e1, r.e_oracle + 1e-10);
    EXPECT_NEAR(r.e_oracle, eff_oracle(delta, covariance(structure)), 1e-14);
    EXPECT_NEAR(r.e2, eff_panel(delta, Vector::Constant(4, 2.0)), 1e-14);
    EXPECT_NEAR(*r.e3, 0.5, 1e-14);
    EXPECT_NEAR(*r.a_d, 2.0, 1e-14);
    EXPECT_NEAR(r.cone_halfangle, detection_cone(4), 1e-15);

    const auto plain = efficiency_report(delta, ErrorStructure::independent(Vector::Ones(4)));
    EXPECT_FALSE(plain.e1);
    EXPECT_FALSE(plain.e3);
    EXPECT_FALSE(plain.a_d);
}
