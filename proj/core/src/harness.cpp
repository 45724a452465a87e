#include "hdcp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hdcp/error.hpp"
#include "hdcp/limits.hpp"
#include "hdcp/projection.hpp"
#include "hdcp/stats.hpp"

namespace hdcp {

namespace {

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::Oracle, "oracle"},
    {Method::QuasiOracle, "quasi-oracle"},
    {Method::PreOracle, "pre-oracle"},
    {Method::RandomProjection, "random"},
    {Method::ScaledSearch, "search"},
    {Method::PanelKnownVar, "panel-known"},
    {Method::PanelEstVar, "panel-est"},
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + fmt(xs[i]);
    return out;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

Vector ones(std::size_t d) { return Vector::Ones(static_cast<Eigen::Index>(d)); }

double projection_statistic(const PanelSeries& x, const Projection& p, VariancePolicy policy,
                            const Matrix& sigma) {
    const Vector y = x.project(p.vector());
    CusumProcess u = cusum(y, CusumKind::Projected);
    double scale = 0.0;
    switch (policy) {
        case VariancePolicy::Known: scale = tau(p, sigma); break;
        case VariancePolicy::Naive: scale = tau_hat1(y); break;
        case VariancePolicy::Split: scale = tau_hat2(y, u); break;
    }
    return amoc_statistic(with_normalizer(std::move(u), scale), WeightFunction(0.0), AmocMode::Max);
}

double panel_stat(const PanelSeries& x, const Vector& variances) {
    return panel_statistic(panel_cusum(x, variances), PanelMode::Max);
}

std::vector<std::pair<std::string, std::string>> echo_config(std::string_view figure,
                                                             const ExperimentConfig& c) {
    std::string methods;
    for (Method m : c.methods) methods += (methods.empty() ? "" : " ") + std::string(to_string(m));
    return {{"figure", std::string(figure)},
            {"d", std::to_string(c.d)},
            {"T", std::to_string(c.T)},
            {"reps", std::to_string(c.reps)},
            {"level", fmt(c.level)},
            {"seed", std::to_string(c.seed)},
            {"variance", std::string(to_string(c.variance))},
            {"change_norm", fmt(c.change_norm)},
            {"angle", fmt(c.angle)},
            {"phi", fmt(c.phi)},
            {"sweep", join(c.sweep)},
            {"methods", methods},
            {"change_location", "0.5"}};
}

template <class Make>
PowerCurve power_study(std::string name, const ExperimentConfig& config, Make make) {
    validate(config);
    PowerCurve curve;
    curve.name = std::move(name);
    curve.reps = config.reps;
    curve.seed = config.seed;
    curve.critical_values = CriticalValues::SizeCorrected;
    curve.echo = echo_config(curve.name, config);
    curve.echo.emplace_back("critical_values", std::string(to_string(curve.critical_values)));
    const double reps = static_cast<double>(config.reps);
    for (double x : config.sweep) {
        auto [scenario, local] = make(x);
        const Matrix null = simulate_statistics(scenario, local.methods, local, false);
        const Matrix alt = simulate_statistics(scenario, local.methods, local, true);
        for (std::size_t j = 0; j < local.methods.size(); ++j) {
            const auto col = static_cast<Eigen::Index>(j);
            const Vector nc = null.col(col);
            const double crit =
                empirical_size_correct(std::vector<double>(nc.data(), nc.data() + nc.size()),
                                       local.level);
            const double rate = static_cast<double>((alt.col(col).array() > crit).count()) / reps;
            curve.points.push_back({x, local.methods[j], rate, std::sqrt(rate * (1.0 - rate) / reps)});
        }
    }
    return curve;
}

ErrorStructure mixed_structure(const Vector& s, double phi) {
    return ErrorStructure::mixed(s, phi * ones(static_cast<std::size_t>(s.size())));
}

}  // namespace

std::string_view to_string(Method m) noexcept {
    for (const auto& [method, name] : kMethodNames) {
        if (method == m) return name;
    }
    return "?";
}

Method parse_method(std::string_view text) {
    for (const auto& [method, name] : kMethodNames) {
        if (name == text) return method;
    }
    fail(ErrorKind::InvalidArgument, "unknown method '" + std::string(text) + "'");
}

bool is_projection(Method m) noexcept {
    return m != Method::PanelKnownVar && m != Method::PanelEstVar;
}

std::string_view to_string(CriticalValues c) noexcept {
    return c == CriticalValues::Asymptotic ? "asymptotic" : "size-corrected";
}

void validate(const ExperimentConfig& c) {
    require(c.d >= 1, ErrorKind::InvalidArgument, "d must be >= 1");
    require(c.T >= 3, ErrorKind::InvalidArgument, "T must be >= 3");
    require(c.reps >= 100, ErrorKind::InvalidArgument, "reps must be >= 100");
    require(c.level > 0.0 && c.level < 1.0, ErrorKind::InvalidArgument, "level must lie in (0,1)");
    require(!c.methods.empty(), ErrorKind::InvalidArgument, "no methods selected");
    require(!c.sweep.empty(), ErrorKind::InvalidArgument, "empty sweep");
    require(c.change_norm >= 0.0 && c.phi >= 0.0, ErrorKind::InvalidArgument,
            "change norm and phi must be >= 0");
}

double PowerCurve::rate(double x, Method m) const {
    for (const auto& p : points) {
        if (p.method == m && std::abs(p.x - x) < 1e-12) return p.rate;
    }
    fail(ErrorKind::InvalidArgument, "no point for " + std::string(to_string(m)) + " at " + fmt(x));
}

double PowerCurve::mc_se(double x, Method m) const {
    for (const auto& p : points) {
        if (p.method == m && std::abs(p.x - x) < 1e-12) return p.mc_se;
    }
    fail(ErrorKind::InvalidArgument, "no point for " + std::string(to_string(m)) + " at " + fmt(x));
}

std::vector<double> PowerCurve::rates(Method m) const {
    std::vector<double> out;
    for (const auto& p : points) {
        if (p.method == m) out.push_back(p.rate);
    }
    return out;
}

void write_csv(const PowerCurve& curve, std::ostream& out) {
    for (const auto& [key, value] : curve.echo) out << "# " << key << '=' << value << '\n';
    out << "sweep_value,method,rejection_rate,mc_se,reps,seed\n";
    for (const auto& p : curve.points) {
        out << fmt(p.x) << ',' << to_string(p.method) << ',' << fmt(p.rate) << ',' << fmt(p.mc_se)
            << ',' << curve.reps << ',' << curve.seed << '\n';
    }
}

Vector flat_direction(std::size_t d) {
    require(d >= 1, ErrorKind::InvalidArgument, "d must be >= 1");
    return ones(d) / std::sqrt(static_cast<double>(d));
}

Vector rotate_in_plane(const Vector& u, double angle) {
    const Eigen::Index d = u.size();
    require(d >= 2, ErrorKind::InvalidArgument, "rotation needs d >= 2");
    require(std::abs(u.norm() - 1.0) < 1e-10, ErrorKind::InvalidArgument, "u must be a unit vector");
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
    v -= v.dot(u) * u;
    if (v.norm() < 1e-8) {
        // u is (anti)parallel to the alternating vector; fall back to e_1.
        v = Vector::Unit(d, 0) - u[0] * u;
    }
    v.normalize();
    return std::cos(angle) * u + std::sin(angle) * v;
}

Matrix simulate_statistics(const Scenario& scenario, const std::vector<Method>& methods,
                           const ExperimentConfig& config, bool with_change) {
    const std::size_t d = scenario.structure.dim();
    const std::size_t T = config.T;
    require(static_cast<std::size_t>(scenario.delta.size()) == d &&
                static_cast<std::size_t>(scenario.direction.size()) == d,
            ErrorKind::DimensionMismatch, "scenario vectors do not match the error dimension");
    const Matrix sigma = covariance(scenario.structure);
    const Vector variances = scenario.structure.variances();

    std::vector<std::optional<Projection>> fixed(methods.size());
    bool needs_random = false;
    for (std::size_t j = 0; j < methods.size(); ++j) {
        switch (methods[j]) {
            case Method::Oracle: fixed[j] = oracle(sigma, scenario.direction); break;
            case Method::QuasiOracle: fixed[j] = quasi_oracle(variances, scenario.direction); break;
            case Method::PreOracle: fixed[j] = pre_oracle(scenario.direction); break;
            case Method::ScaledSearch: fixed[j] = scaled_search(sigma, scenario.search); break;
            case Method::RandomProjection: needs_random = true; break;
            case Method::PanelKnownVar:
            case Method::PanelEstVar: break;
        }
    }
    const VarianceMethod panel_method = config.variance == VariancePolicy::Split
                                            ? VarianceMethod::SplitAtArgmax
                                            : VarianceMethod::Naive;
    const Matrix mean = with_change ? mean_path(ChangeSpec{scenario.delta, SignalShape::amoc(0.5), {}}, d, T)
                                    : Matrix::Zero(static_cast<Eigen::Index>(d),
                                                   static_cast<Eigen::Index>(T));

    Matrix out(static_cast<Eigen::Index>(config.reps), static_cast<Eigen::Index>(methods.size()));
    parallel_for(config.reps, [&](std::size_t i) {
        Rng rng = make_stream(config.seed, i);
        Matrix e(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(T));
        for (Eigen::Index t = 0; t < e.cols(); ++t) scenario.structure.draw(rng, e.col(t));
        std::optional<Projection> random;
        if (needs_random) {
            Rng prng = make_stream(config.seed, i, 1);
            random = random_unit(d, prng);
        }
        const PanelSeries x(e + mean);
        for (std::size_t j = 0; j < methods.size(); ++j) {
            double s = 0.0;
            switch (methods[j]) {
                case Method::RandomProjection:
                    s = projection_statistic(x, *random, config.variance, sigma);
                    break;
                case Method::PanelKnownVar: s = panel_stat(x, variances); break;
                case Method::PanelEstVar: s = panel_stat(x, component_variances(x, panel_method)); break;
                default: s = projection_statistic(x, *fixed[j], config.variance, sigma); break;
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
        }
    });
    return out;
}

double empirical_size_correct(std::vector<double> null_statistics, double alpha) {
    std::sort(null_statistics.begin(), null_statistics.end());
    return upper_quantile(null_statistics, alpha);
}

double empirical_size_correct(Method method, const Scenario& scenario,
                              const ExperimentConfig& config) {
    require(config.reps >= 500, ErrorKind::InvalidArgument, "size correction needs reps >= 500");
    const Matrix null = simulate_statistics(scenario, {method}, config, false);
    const Vector c = null.col(0);
    return empirical_size_correct(std::vector<double>(c.data(), c.data() + c.size()), config.level);
}

PowerCurve size_experiment(const ExperimentConfig& config) {
    validate(config);
    PowerCurve curve;
    curve.name = "size";
    curve.reps = config.reps;
    curve.seed = config.seed;
    curve.critical_values = CriticalValues::Asymptotic;
    curve.echo = echo_config(curve.name, config);
    curve.echo.emplace_back("critical_values", std::string(to_string(curve.critical_values)));

    const SimulationSettings law{config.T, config.law_reps, config.seed};
    const double proj_crit = quantile(LimitLaw::bridge_sup().on_grid_only(), config.level, law);
    const double panel_crit = quantile(LimitLaw::panel_sup(), config.level, law);
    const double reps = static_cast<double>(config.reps);
    const Vector direction = rotate_in_plane(flat_direction(config.d), std::numbers::pi / 4.0);

    for (double phi : config.sweep) {
        const Scenario scenario{mixed_structure(ones(config.d), phi),
                                Vector::Zero(static_cast<Eigen::Index>(config.d)), direction,
                                direction};
        const Matrix stats = simulate_statistics(scenario, config.methods, config, false);
        for (std::size_t j = 0; j < config.methods.size(); ++j) {
            const double crit = is_projection(config.methods[j]) ? proj_crit : panel_crit;
            const double rate =
                static_cast<double>((stats.col(static_cast<Eigen::Index>(j)).array() > crit).count()) /
                reps;
            curve.points.push_back(
                {phi, config.methods[j], rate, std::sqrt(rate * (1.0 - rate) / reps)});
        }
    }
    return curve;
}

PowerCurve power_vs_angle(const ExperimentConfig& config) {
    return power_study("power-vs-angle", config, [&](double angle) {
        const Vector u = flat_direction(config.d);
        Scenario s{ErrorStructure::independent(ones(config.d)), config.change_norm * u, u,
                   rotate_in_plane(u, angle)};
        return std::pair{std::move(s), config};
    });
}

PowerCurve power_vs_dimension(const ExperimentConfig& config) {
    return power_study("power-vs-dimension", config, [&](double dim) {
        require(dim >= 2 && dim == std::floor(dim), ErrorKind::InvalidArgument,
                "dimension sweep values must be integers >= 2");
        ExperimentConfig local = config;
        local.d = static_cast<std::size_t>(dim);
        const Vector u = flat_direction(local.d);
        Scenario s{ErrorStructure::independent(ones(local.d)), config.change_norm * u, u, u};
        return std::pair{std::move(s), local};
    });
}

PowerCurve power_vs_phi(const ExperimentConfig& config) {
    return power_study("power-vs-phi", config, [&](double phi) {
        const Vector dir = rotate_in_plane(flat_direction(config.d), config.angle);
        Scenario s{mixed_structure(ones(config.d), phi), config.change_norm * dir, dir, dir};
        return std::pair{std::move(s), config};
    });
}

PowerCurve power_vs_changesize(const ExperimentConfig& config) {
    return power_study("power-vs-changesize", config, [&](double size) {
        Vector sd(static_cast<Eigen::Index>(config.d));
        for (Eigen::Index i = 0; i < sd.size(); ++i) {
            sd[i] = 0.5 + static_cast<double>(i + 1) / static_cast<double>(config.d);
        }
        const Vector dir = rotate_in_plane(flat_direction(config.d), std::numbers::pi / 4.0);
        const double norm = size * std::sqrt(static_cast<double>(config.d));
        Scenario s{mixed_structure(sd, config.phi), norm * dir, dir, dir};
        return std::pair{std::move(s), config};
    });
}

ExperimentConfig default_config(int figure) {
    using enum Method;
    ExperimentConfig c;
    c.d = 200;
    c.T = 100;
    c.reps = 1000;
    c.change_norm = 0.05 * std::sqrt(200.0);
    switch (figure) {
        case 1:
            c.sweep = linspace(0.0, 1.0, 11);
            c.methods = {Oracle, QuasiOracle, PreOracle, RandomProjection, PanelKnownVar, PanelEstVar};
            c.change_norm = 0.0;
            break;
        case 2:
            c.sweep = linspace(0.0, std::numbers::pi / 2.0, 9);
            c.methods = {ScaledSearch, Oracle, RandomProjection, PanelKnownVar, PanelEstVar};
            break;
        case 3:
            c.sweep = {10, 20, 50, 100, 200, 500};
            c.methods = {Oracle, RandomProjection, PanelKnownVar, PanelEstVar};
            c.change_norm = 0.85;
            break;
        case 4:
            c.sweep = linspace(0.0, 1.0, 11);
            c.methods = {Oracle, QuasiOracle, PreOracle, RandomProjection, PanelKnownVar, PanelEstVar};
            break;
        case 5:
            c.sweep = linspace(0.0, 0.1, 11);
            c.methods = {Oracle, QuasiOracle, PreOracle, RandomProjection, PanelKnownVar, PanelEstVar};
            break;
        default: fail(ErrorKind::InvalidArgument, "figure must be 1..5");
    }
    return c;
}

std::vector<std::filesystem::path> run_figure(int figure, const ExperimentConfig& config,
                                              const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto emit = [&](const PowerCurve& curve, const std::string& file) {
        const auto path = dir / file;
        std::ofstream out(path);
        require(static_cast<bool>(out), ErrorKind::InvalidArgument, "cannot write " + path.string());
        write_csv(curve, out);
        written.push_back(path);
    };
    switch (figure) {
        case 1: {
            const std::pair<VariancePolicy, const char*> panels[] = {
                {VariancePolicy::Known, "fig1_known.csv"},
                {VariancePolicy::Naive, "fig1_tau1.csv"},
                {VariancePolicy::Split, "fig1_tau2.csv"}};
            for (const auto& [policy, file] : panels) {
                ExperimentConfig c = config;
                c.variance = policy;
                emit(size_experiment(c), file);
            }
            break;
        }
        case 2: emit(power_vs_angle(config), "fig2.csv"); break;
        case 3: emit(power_vs_dimension(config), "fig3.csv"); break;
        case 4: {
            const std::pair<double, const char*> angles[] = {
                {0.0, "fig4_angle0.csv"},
                {std::numbers::pi / 8.0, "fig4_angle_pi8.csv"},
                {std::numbers::pi / 4.0, "fig4_angle_pi4.csv"},
                {std::numbers::pi / 2.0, "fig4_angle_pi2.csv"}};
            for (const auto& [angle, file] : angles) {
                ExperimentConfig c = config;
                c.angle = angle;
                emit(power_vs_phi(c), file);
            }
            break;
        }
        case 5: {
            const std::pair<double, const char*> phis[] = {
                {0.0, "fig5_phi0.csv"}, {0.5, "fig5_phi0.5.csv"}, {1.0, "fig5_phi1.csv"}};
            for (const auto& [phi, file] : phis) {
                ExperimentConfig c = config;
                c.phi = phi;
                emit(power_vs_changesize(c), file);
            }
            break;
        }
        default: fail(ErrorKind::InvalidArgument, "figure must be 1..5");
    }
    return written;
}

}  // namespace hdcp
