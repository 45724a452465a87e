#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <hdcp/error.hpp>
#include <hdcp/stats.hpp>

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

PanelSeries row(const Vector& y) { return PanelSeries(Matrix(y.transpose())); }

PanelSeries noise(std::size_t d, std::size_t T, std::uint64_t seed) {
    return generate(ChangeSpec{Vector::Zero(static_cast<Eigen::Index>(d))},
                    ErrorStructure::independent(Vector::Ones(static_cast<Eigen::Index>(d))), T, seed);
}

}  // namespace

TEST(Cusum, HandExample) {
    const auto u = projected_cusum(row(vec({0, 0, 1, 1})), custom(vec({1})));
    EXPECT_TRUE(u.values.isApprox(vec({-0.25, -0.5, -0.25, 0})));
    EXPECT_EQ(u.values[3], 0.0);
    EXPECT_EQ(u.kind, CusumKind::Projected);
}

TEST(Cusum, ConstantAndShiftInvariance) {
    const auto u = cusum(vec({2, 2, 2, 2, 2}));
    EXPECT_LE(u.values.cwiseAbs().maxCoeff(), 1e-15);
    const Vector y = vec({0.3, -1.2, 2.0, 0.7, 0.1, -0.5});
    const Vector shifted = (y.array() + 10.0).matrix();
    EXPECT_LE((cusum(y).values - cusum(shifted).values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Cusum, ProjectionDimensionChecked) {
    EXPECT_THROW((void)projected_cusum(noise(3, 10, 1), custom(vec({1, 1}))), Error);
}

TEST(Tau, Examples) {
    EXPECT_DOUBLE_EQ(tau(custom(vec({1, 0})), Matrix::Identity(2, 2)), 1.0);
    Matrix s(2, 2);
    s << 1, 0.5, 0.5, 1;
    EXPECT_NEAR(tau(custom(vec({1, 1})), s), std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(tau(custom(vec({-3, -3})), s), 3 * std::sqrt(3.0), 1e-13);
    Matrix rank_one(2, 2);
    rank_one << 1, 1, 1, 1;
    EXPECT_EQ(kind_of([&] { (void)tau(custom(vec({1, -1})), rank_one); }),
              ErrorKind::DegenerateProjection);
}

TEST(TauHat, Examples) {
    EXPECT_DOUBLE_EQ(std::pow(tau_hat1(vec({1, -1, 1, -1})), 2), 1.0);
    EXPECT_DOUBLE_EQ(std::pow(tau_hat1(vec({0, 0, 1, 1})), 2), 0.25);
    EXPECT_EQ(kind_of([] { (void)tau_hat2(vec({0, 0, 1, 1})); }), ErrorKind::ZeroVariance);
    EXPECT_EQ(kind_of([] { (void)tau_hat1(vec({3, 3, 3})); }), ErrorKind::ZeroVariance);
    EXPECT_EQ(kind_of([] { (void)tau_hat2(vec({3, 3, 3})); }), ErrorKind::ZeroVariance);
    EXPECT_THROW((void)tau_hat1(vec({1, 2})), Error);
}

TEST(TauHat, SplitUsesSegmentMeans) {
    // Split at k = 2: segments (0, 2) and (5, 5, 8); centred sums 2 and 6.
    const Vector y = vec({0, 2, 5, 5, 8});
    const auto u = cusum(y);
    ASSERT_EQ(split_index(u), 2u);
    EXPECT_NEAR(std::pow(tau_hat2(y, u), 2), (2.0 + 6.0) / 5.0, 1e-12);
}

TEST(TauHat, EstimatorsAgreeUnderNull) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        const Vector y = noise(1, 500, 100 + rep).data().row(0).transpose();
        s1 += tau_hat1(y);
        s2 += tau_hat2(y);
    }
    EXPECT_NEAR(s2 / s1, 1.0, 0.1);
}

TEST(Weight, Values) {
    EXPECT_EQ(WeightFunction(0.0)(0.1), 1.0);
    EXPECT_NEAR(WeightFunction(0.25)(0.5), std::sqrt(2.0), 1e-12);
    EXPECT_THROW(WeightFunction(0.5), Error);
    EXPECT_THROW(WeightFunction(-0.1), Error);
}

TEST(Amoc, Examples) {
    const auto u = cusum(vec({0, 0, 1, 1}));
    EXPECT_DOUBLE_EQ(amoc_statistic(u, WeightFunction(0.0), AmocMode::Max), 0.5);
    EXPECT_DOUBLE_EQ(amoc_statistic(u, WeightFunction(0.0), AmocMode::Sum), 0.25);
    EXPECT_DOUBLE_EQ(amoc_statistic(u, WeightFunction(0.0), AmocMode::SumSquared),
                     (0.0625 + 0.25 + 0.0625) / 4);
    EXPECT_DOUBLE_EQ(amoc_statistic(with_normalizer(u, 2.0), WeightFunction(0.0), AmocMode::Max), 0.25);
    EXPECT_THROW((void)amoc_statistic(with_normalizer(u, 0.0), WeightFunction(0.0), AmocMode::Max), Error);
}

TEST(Amoc, ScaleInvariantWithEstimatedTau) {
    const auto x = noise(4, 60, 7);
    const Vector p = vec({1, -0.5, 2, 0.3});
    for (double c : {-3.0, 0.01, 7.5}) {
        const Vector y1 = x.project(p);
        const Vector y2 = x.project(c * p);
        const auto u1 = cusum(y1, CusumKind::Projected);
        const auto u2 = cusum(y2, CusumKind::Projected);
        for (auto mode : {AmocMode::Max, AmocMode::Sum, AmocMode::SumSquared}) {
            const double a = amoc_statistic(with_normalizer(u1, tau_hat2(y1, u1)), WeightFunction(0.2), mode);
            const double b = amoc_statistic(with_normalizer(u2, tau_hat2(y2, u2)), WeightFunction(0.2), mode);
            EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, a));
        }
    }
}

TEST(Amoc, LocationInvariance) {
    const auto x = noise(3, 40, 9);
    const PanelSeries shifted(x.data().colwise() + vec({5, -2, 1}));
    const Vector p = vec({1, 2, 3});
    const auto a = projected_cusum(x, custom(p));
    const auto b = projected_cusum(shifted, custom(p));
    EXPECT_LE((a.values - b.values).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((panel_cusum(x, vec({1, 1, 1})) - panel_cusum(shifted, vec({1, 1, 1}))).cwiseAbs().maxCoeff(),
              1e-10);
}

TEST(Epidemic, Examples) {
    const auto u = cusum(vec({0, 1, 1, 0}));
    EXPECT_TRUE(u.values.isApprox(vec({-0.25, 0, 0.25, 0})));
    EXPECT_DOUBLE_EQ(epidemic_statistic(u, EpidemicMode::Max), 0.5);
    // pairs: |0.25| + |0.5| + |0.25| + |0.25| + |0| + |-0.25| -> 1.5 / 16
    EXPECT_DOUBLE_EQ(epidemic_statistic(u, EpidemicMode::Sum), 1.5 / 16);
    EXPECT_EQ(epidemic_statistic(cusum(vec({1, 1, 1})), EpidemicMode::Max), 0.0);
    CusumProcess shifted = u;
    shifted.values.array() += 3.0;
    EXPECT_DOUBLE_EQ(epidemic_statistic(shifted, EpidemicMode::Max), 0.5);
    EXPECT_NEAR(epidemic_statistic(shifted, EpidemicMode::Sum), 1.5 / 16, 1e-15);
}

TEST(Changepoint, Examples) {
    EXPECT_DOUBLE_EQ(changepoint_estimate(cusum(vec({0, 0, 1, 1})), WeightFunction(0.0)), 0.5);
    CusumProcess twin{vec({0.1, 0.5, 0.1, -0.5, 0.2, 0}), 1.0};
    EXPECT_EQ(changepoint_index(twin, WeightFunction(0.0)), 2u);
    EXPECT_EQ(kind_of([] { (void)changepoint_estimate(cusum(vec({1, 1, 1, 1})), WeightFunction(0.0)); }),
              ErrorKind::AllZero);
}

TEST(Changepoint, NoiseFreeAmoc) {
    const std::size_t T = 1000;
    for (double theta : {0.3, 0.5, 0.71}) {
        const ChangeSpec spec{vec({1.0}), SignalShape::amoc(theta)};
        const auto x = generate(spec, ErrorStructure::fully_dependent(vec({0})), T, std::uint64_t{1});
        const double est = changepoint_estimate(projected_cusum(x, custom(vec({1}))), WeightFunction(0.0));
        EXPECT_LE(std::abs(est - theta), 1.0 / T + 1e-12);
    }
}

TEST(Panel, Examples) {
    const Vector v = panel_cusum(row(vec({1, -1})), vec({1}));
    ASSERT_EQ(v.size(), 2);
    EXPECT_NEAR(v[0], 0.25, 1e-15);
    EXPECT_EQ(v[1], 0.0);
    EXPECT_DOUBLE_EQ(panel_statistic(vec({0.25, 0}), PanelMode::Max), 0.25);
    EXPECT_EQ(panel_statistic(Vector::Zero(5), PanelMode::Max), 0.0);
    EXPECT_EQ(panel_statistic(Vector::Zero(5), PanelMode::Int), 0.0);
    EXPECT_DOUBLE_EQ(panel_statistic(vec({1, 1, 1, 0}), PanelMode::Int), 0.75);
    EXPECT_EQ(kind_of([] { (void)panel_cusum(row(vec({1, 2, 3})), vec({0})); }),
              ErrorKind::NonPositiveVariance);
}

TEST(Panel, ScaleEquivariance) {
    const auto x = noise(5, 30, 21);
    const Vector var = vec({1, 2, 0.5, 1, 3});
    const Vector a = panel_cusum(x, var);
    const Vector b = panel_cusum(PanelSeries(2.0 * x.data()), 4.0 * var);
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ComponentVariances, Examples) {
    Matrix m(3, 4);
    m << 1, -1, 1, -1, 0, 0, 1, 1, 2, 2, 2, 2;
    const PanelSeries x(m);
    EXPECT_EQ(kind_of([&] { (void)component_variances(x, VarianceMethod::Naive); }), ErrorKind::ZeroVariance);
    const PanelSeries top(m.topRows(2));
    const Vector naive = component_variances(top, VarianceMethod::Naive);
    EXPECT_DOUBLE_EQ(naive[0], 1.0);
    EXPECT_DOUBLE_EQ(naive[1], 0.25);
    EXPECT_EQ(kind_of([&] { (void)component_variances(top, VarianceMethod::SplitAtArgmax); }),
              ErrorKind::ZeroVariance);
}
