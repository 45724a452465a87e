#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include <hdcp/detector.hpp>
#include <hdcp/error.hpp>

using namespace hdcp;

namespace {

constexpr SimulationSettings kSmallNull{200, 2000, 3};

PanelSeries sample(std::size_t d, std::size_t T, double shift, std::uint64_t seed, double theta = 0.5) {
    const ChangeSpec spec{Vector::Constant(static_cast<Eigen::Index>(d), shift), SignalShape::amoc(theta), {}};
    return generate(spec, ErrorStructure::independent(Vector::Ones(static_cast<Eigen::Index>(d))), T, seed);
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

}  // namespace

TEST(VariancePolicy, RoundTrip) {
    for (auto v : {VariancePolicy::Known, VariancePolicy::Naive, VariancePolicy::Split}) {
        EXPECT_EQ(parse_variance_policy(to_string(v)), v);
    }
    EXPECT_THROW((void)parse_variance_policy("robust"), Error);
}

TEST(NullLaw, Mapping) {
    ProjectionTestConfig c;
    EXPECT_EQ(null_law(c), LimitLaw::bridge_sup());
    c.beta = 0.25;
    c.amoc_mode = AmocMode::Sum;
    EXPECT_EQ(null_law(c), LimitLaw::bridge_abs_int(0.25));
    c.amoc_mode = AmocMode::SumSquared;
    EXPECT_EQ(null_law(c), LimitLaw::bridge_int(0.25));
    c.form = ChangeForm::Epidemic;
    EXPECT_THROW((void)null_law(c), Error);
    c.beta = 0.0;
    EXPECT_EQ(null_law(c), LimitLaw::epidemic_sup());
    c.epidemic_mode = EpidemicMode::Sum;
    EXPECT_EQ(null_law(c), LimitLaw::epidemic_int());

    PanelTestConfig pc;
    EXPECT_EQ(null_law(pc), LimitLaw::panel_sup());
    pc.mode = PanelMode::Int;
    EXPECT_EQ(null_law(pc), LimitLaw::panel_int());
}

TEST(ProjectionTest, StatisticMatchesPrimitives) {
    const auto x = sample(4, 80, 0.0, 11);
    const Vector p = Vector::Ones(4);
    for (auto policy : {VariancePolicy::Known, VariancePolicy::Naive, VariancePolicy::Split}) {
        ProjectionTestConfig c;
        c.variance = policy;
        c.sigma = Matrix::Identity(4, 4);
        c.null_settings = kSmallNull;
        const ProjectionTest test(custom(p), c);
        const auto r = test.run(x);
        const Vector y = x.project(p);
        const auto u = cusum(y, CusumKind::Projected);
        const double scale = policy == VariancePolicy::Known   ? 2.0
                             : policy == VariancePolicy::Naive ? tau_hat1(y)
                                                               : tau_hat2(y, u);
        EXPECT_NEAR(r.statistic, amoc_statistic(with_normalizer(u, scale), WeightFunction(0.0), AmocMode::Max),
                    1e-12);
        EXPECT_DOUBLE_EQ(r.critical_value, test.null().quantile(0.05));
        EXPECT_DOUBLE_EQ(r.p_value, test.null().p_value(r.statistic));
        EXPECT_EQ(r.reject, r.statistic > r.critical_value);
        ASSERT_TRUE(r.changepoint_index.has_value());
    }
}

TEST(ProjectionTest, DetectsLargeChange) {
    ProjectionTestConfig c;
    c.null_settings = kSmallNull;
    const ProjectionTest test(pre_oracle(Vector::Ones(5)), c);
    const auto r = test.run(sample(5, 200, 1.0, 4, 0.3));
    EXPECT_TRUE(r.reject);
    EXPECT_LT(r.p_value, 0.01);
    ASSERT_TRUE(r.estimated_changepoint.has_value());
    EXPECT_NEAR(*r.estimated_changepoint, 0.3, 0.03);
}

TEST(ProjectionTest, MarginRestrictsSearch) {
    ProjectionTestConfig c;
    c.null_settings = kSmallNull;
    const ProjectionTest test(pre_oracle(Vector::Ones(2)), c);
    const auto x = sample(2, 100, 20.0, 4, 0.05);
    EXPECT_EQ(*test.run(x).changepoint_index, 5u);
    EXPECT_EQ(*test.run(x, 20).changepoint_index, 20u);
    EXPECT_THROW((void)test.run(x, 51), Error);
    EXPECT_THROW((void)test.run(x, 0), Error);
}

TEST(ProjectionTest, SharedNull) {
    ProjectionTestConfig c;
    auto null = std::make_shared<const NullDistribution>(null_law(c), kSmallNull);
    const ProjectionTest a(custom(Vector::Ones(3)), c, null);
    const ProjectionTest b(custom(Vector::Ones(3)), c, null);
    const auto x = sample(3, 50, 0.2, 9);
    EXPECT_EQ(a.run(x).p_value, b.run(x).p_value);
    EXPECT_EQ(&a.null(), &b.null());
}

TEST(ProjectionTest, Errors) {
    ProjectionTestConfig c;
    c.null_settings = kSmallNull;
    const ProjectionTest test(custom(Vector::Ones(3)), c);
    EXPECT_EQ(kind_of([&] { (void)test.run(sample(4, 50, 0, 1)); }), ErrorKind::DimensionMismatch);
    c.variance = VariancePolicy::Known;
    EXPECT_THROW(ProjectionTest(custom(Vector::Ones(3)), c), Error);
    c.sigma = Matrix::Identity(2, 2);
    EXPECT_EQ(kind_of([&] { ProjectionTest t(custom(Vector::Ones(3)), c); }), ErrorKind::DimensionMismatch);
    c.variance = VariancePolicy::Split;
    c.alpha = 1.0;
    EXPECT_THROW(ProjectionTest(custom(Vector::Ones(3)), c), Error);
    Matrix flat = Matrix::Zero(2, 50);
    EXPECT_EQ(kind_of([&] {
                  const ProjectionTest t(custom(Vector::Ones(2)), ProjectionTestConfig{.null_settings = kSmallNull});
                  (void)t.run(PanelSeries(flat));
              }),
              ErrorKind::ZeroVariance);
}

TEST(ProjectionTest, EpidemicHasNoChangepoint) {
    ProjectionTestConfig c;
    c.form = ChangeForm::Epidemic;
    c.null_settings = kSmallNull;
    const ProjectionTest test(custom(Vector::Ones(3)), c);
    const ChangeSpec spec{Vector::Constant(3, 1.5), SignalShape::epidemic(0.3, 0.6), {}};
    const auto r = test.run(generate(spec, ErrorStructure::independent(Vector::Ones(3)), 150, std::uint64_t{2}));
    EXPECT_TRUE(r.reject);
    EXPECT_FALSE(r.changepoint_index.has_value());
}

TEST(PanelTest, StatisticMatchesPrimitives) {
    const auto x = sample(6, 60, 0.5, 13);
    for (auto policy : {VariancePolicy::Known, VariancePolicy::Naive, VariancePolicy::Split}) {
        PanelTestConfig c;
        c.variance = policy;
        c.variances = Vector::Ones(6);
        c.null_settings = kSmallNull;
        const PanelTest test(6, c);
        const auto r = test.run(x);
        const Vector var = policy == VariancePolicy::Known   ? Vector::Ones(6)
                           : policy == VariancePolicy::Naive ? component_variances(x, VarianceMethod::Naive)
                                                             : component_variances(x, VarianceMethod::SplitAtArgmax);
        const Vector v = panel_cusum(x, var);
        EXPECT_NEAR(r.statistic, panel_statistic(v, PanelMode::Max), 1e-12);
        Eigen::Index at = 0;
        v.head(59).maxCoeff(&at);
        EXPECT_EQ(*r.changepoint_index, static_cast<std::size_t>(at) + 1);
    }
}

TEST(PanelTest, Errors) {
    PanelTestConfig c;
    c.null_settings = kSmallNull;
    EXPECT_THROW(PanelTest(0, c), Error);
    const PanelTest test(3, c);
    EXPECT_EQ(kind_of([&] { (void)test.run(sample(2, 40, 0, 1)); }), ErrorKind::DimensionMismatch);
    c.variance = VariancePolicy::Known;
    EXPECT_THROW(PanelTest(3, c), Error);
    c.variances = Vector::Ones(2);
    EXPECT_EQ(kind_of([&] { PanelTest t(3, c); }), ErrorKind::DimensionMismatch);
}
