#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include <hdcp/detector.hpp>
#include <hdcp/efficiency.hpp>
#include <hdcp/error.hpp>
#include <hdcp/harness.hpp>
#include <hdcp/limits.hpp>
#include <hdcp/segment.hpp>

#include "csv.hpp"

namespace hdcp::cli {

namespace {

struct NullOptions {
    std::size_t reps = 100000;
    std::size_t grid = 1000;
    std::uint64_t seed = 0;
    std::string table_dir;
};

struct DetectorOptions {
    std::string input;
    bool transpose = false;
    std::string method = "projection";
    std::string direction = "flat";
    std::string delta;
    std::string variances;
    std::string sigma;
    double alpha = 0.05;
    double beta = 0.0;
    std::string variance = "split";
    std::string stat = "max";
    std::string form = "amoc";
    NullOptions null;
};

void add_null_options(CLI::App* cmd, NullOptions& o) {
    cmd->add_option("--reps", o.reps, "Monte-Carlo paths for the null law")->capture_default_str();
    cmd->add_option("--grid", o.grid, "Grid size of the simulated paths")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    cmd->add_option("--table-dir", o.table_dir,
                    "Quantile table cache (default: $HDCP_TABLE_DIR)");
}

void add_detector_options(CLI::App* cmd, DetectorOptions& o) {
    cmd->add_option("-i,--input", o.input, "CSV file, rows = time, columns = components")
        ->required();
    cmd->add_flag("--transpose", o.transpose, "Input rows are components, columns time");
    cmd->add_option("--method", o.method, "projection | panel")
        ->check(CLI::IsMember({"projection", "panel"}))
        ->capture_default_str();
    cmd->add_option("--direction", o.direction,
                    "Projection: file, or preset flat | pre-oracle | quasi | oracle")
        ->capture_default_str();
    cmd->add_option("--delta", o.delta, "Change vector file (for presets)");
    cmd->add_option("--variances", o.variances, "Component variance file");
    cmd->add_option("--sigma", o.sigma, "Covariance matrix file");
    cmd->add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
    cmd->add_option("--beta", o.beta, "Weight exponent in [0, 1/2)")->capture_default_str();
    cmd->add_option("--variance", o.variance, "known | naive | split")
        ->check(CLI::IsMember({"known", "naive", "split"}))
        ->capture_default_str();
    cmd->add_option("--stat", o.stat, "max | sum | sum-squared (projection), max | int (panel)")
        ->check(CLI::IsMember({"max", "sum", "sum-squared", "int"}))
        ->capture_default_str();
    cmd->add_option("--form", o.form, "amoc | epidemic")
        ->check(CLI::IsMember({"amoc", "epidemic"}))
        ->capture_default_str();
    add_null_options(cmd, o.null);
}

std::filesystem::path table_dir(const NullOptions& o) {
    return o.table_dir.empty() ? default_table_dir() : std::filesystem::path(o.table_dir);
}

SimulationSettings settings(const NullOptions& o) { return {o.grid, o.reps, o.seed}; }

Vector need_vector(const std::string& path, const char* flag, const std::string& why) {
    require(!path.empty(), ErrorKind::InvalidArgument, why + " needs " + flag);
    return read_vector(path);
}

Projection make_direction(const std::string& spec, std::size_t d, const DetectorOptions& o) {
    if (spec == "flat") return custom(Vector::Ones(static_cast<Eigen::Index>(d)));
    if (spec == "pre-oracle") return pre_oracle(need_vector(o.delta, "--delta", spec));
    if (spec == "quasi") {
        return quasi_oracle(need_vector(o.variances, "--variances", spec),
                            need_vector(o.delta, "--delta", spec));
    }
    if (spec == "oracle") {
        require(!o.sigma.empty(), ErrorKind::InvalidArgument, "oracle needs --sigma");
        return oracle(read_table(o.sigma), need_vector(o.delta, "--delta", spec));
    }
    return custom(read_vector(spec));
}

std::unique_ptr<Detector> make_detector(const DetectorOptions& o, std::size_t d) {
    const VariancePolicy policy = parse_variance_policy(o.variance);
    const SimulationSettings null_settings = settings(o.null);
    validate(null_settings);
    if (o.method == "panel") {
        PanelTestConfig c;
        c.alpha = o.alpha;
        require(o.stat == "max" || o.stat == "int", ErrorKind::InvalidArgument,
                "panel statistic must be max or int");
        c.mode = o.stat == "max" ? PanelMode::Max : PanelMode::Int;
        c.variance = policy;
        if (policy == VariancePolicy::Known) {
            c.variances = need_vector(o.variances, "--variances", "known panel variance");
        }
        c.null_settings = null_settings;
        return std::make_unique<PanelTest>(d, c);
    }
    ProjectionTestConfig c;
    c.alpha = o.alpha;
    c.beta = o.beta;
    c.form = o.form == "amoc" ? ChangeForm::Amoc : ChangeForm::Epidemic;
    if (o.stat == "max") {
        c.amoc_mode = AmocMode::Max;
        c.epidemic_mode = EpidemicMode::Max;
    } else if (o.stat == "sum") {
        c.amoc_mode = AmocMode::Sum;
        c.epidemic_mode = EpidemicMode::Sum;
    } else {
        require(o.stat == "sum-squared" && c.form == ChangeForm::Amoc, ErrorKind::InvalidArgument,
                "statistic '" + o.stat + "' does not apply to this test");
        c.amoc_mode = AmocMode::SumSquared;
    }
    c.variance = policy;
    if (policy == VariancePolicy::Known) {
        require(!o.sigma.empty(), ErrorKind::InvalidArgument, "known projection variance needs --sigma");
        c.sigma = read_table(o.sigma);
    }
    c.null_settings = null_settings;
    return std::make_unique<ProjectionTest>(make_direction(o.direction, d, o), c);
}

LimitLaw detector_law(const DetectorOptions& o) {
    if (o.method == "panel") {
        return o.stat == "int" ? LimitLaw::panel_int() : LimitLaw::panel_sup();
    }
    ProjectionTestConfig c;
    c.beta = o.beta;
    c.form = o.form == "amoc" ? ChangeForm::Amoc : ChangeForm::Epidemic;
    c.amoc_mode = o.stat == "sum" ? AmocMode::Sum
                  : o.stat == "sum-squared" ? AmocMode::SumSquared
                                            : AmocMode::Max;
    c.epidemic_mode = o.stat == "sum" ? EpidemicMode::Sum : EpidemicMode::Max;
    return null_law(c);
}

PanelSeries load_panel(const DetectorOptions& o, bool fuller, double tau_f) {
    Matrix m = read_panel(o.input, o.transpose);
    if (fuller) {
        Matrix y(m.rows(), m.cols() - 1);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const Vector row = m.row(i);
            const auto f = fuller_transform(std::vector<double>(row.data(), row.data() + row.size()), tau_f);
            y.row(i) = Eigen::Map<const Vector>(f.data(), static_cast<Eigen::Index>(f.size()));
        }
        m = std::move(y);
    }
    return PanelSeries(std::move(m));
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

// --- subcommands -------------------------------------------------------------

int cmd_test(const DetectorOptions& o, std::ostream& out) {
    const PanelSeries x = load_panel(o, false, 0.0);
    const auto detector = make_detector(o, x.dim());
    TestResult r = detector->run(x);
    if (const auto dir = table_dir(o.null); !dir.empty()) {
        const QuantileTable table = TableCache(dir).get(detector_law(o), {o.alpha}, settings(o.null));
        r.critical_value = table.at(o.alpha);
        r.reject = r.statistic > r.critical_value;
    }
    out << "statistic=" << num(r.statistic) << '\n'
        << "critical_value=" << num(r.critical_value) << '\n'
        << "p_value=" << num(r.p_value) << '\n'
        << "reject=" << (r.reject ? "true" : "false") << '\n';
    if (r.changepoint_index) {
        out << "changepoint_index=" << *r.changepoint_index << '\n'
            << "changepoint_fraction=" << num(*r.estimated_changepoint) << '\n';
    }
    return r.reject ? kExitReject : kExitAccept;
}

int cmd_segment(const DetectorOptions& o, std::size_t min_segment, bool fuller, double tau_f,
                std::ostream& out) {
    const PanelSeries x = load_panel(o, fuller, tau_f);
    const auto detector = make_detector(o, x.dim());
    const SegmentationResult result = binary_segmentation(x, *detector, o.alpha, min_segment);
    out << "location,statistic,p_value,depth,order\n";
    for (const auto& c : result.changes) {
        out << c.location << ',' << num(c.statistic) << ',' << num(c.p_value) << ',' << c.depth
            << ',' << c.order << '\n';
    }
    return kExitAccept;
}

int cmd_critval(const std::string& law_text, const std::vector<double>& alphas,
                const NullOptions& o, const std::string& out_path, std::ostream& out) {
    const LimitLaw law = LimitLaw::parse(law_text);
    const SimulationSettings s = settings(o);
    validate(s);
    QuantileTable table;
    if (const auto dir = table_dir(o); !dir.empty() && out_path.empty()) {
        const TableCache cache(dir);
        table = cache.get(law, alphas, s);
        out << cache.path_for(law, s).string() << '\n';
        return kExitAccept;
    }
    table = make_table(law, alphas, s);
    if (out_path.empty()) {
        table.write(out);
    } else {
        std::ofstream file(out_path);
        require(static_cast<bool>(file), ErrorKind::InvalidArgument, "cannot write " + out_path);
        table.write(file);
    }
    return kExitAccept;
}

struct EfficiencyOptions {
    std::string delta;
    std::string sigma;
    std::string s;
    std::string phi;
    std::string direction;
};

int cmd_efficiency(const EfficiencyOptions& o, std::ostream& out) {
    const Vector delta = read_vector(o.delta);
    std::optional<ErrorStructure> structure;
    if (!o.sigma.empty()) {
        require(o.s.empty() && o.phi.empty(), ErrorKind::InvalidArgument,
                "give either --sigma or --s/--phi");
        const Matrix sigma = read_table(o.sigma);
        require(sigma.rows() == sigma.cols(), ErrorKind::DimensionMismatch, "--sigma is not square");
        structure = ErrorStructure::general(sqrt_psd(sigma));
    } else {
        require(!o.s.empty(), ErrorKind::InvalidArgument, "efficiency needs --sigma or --s");
        const Vector s = read_vector(o.s);
        structure = o.phi.empty() ? ErrorStructure::independent(s)
                                  : ErrorStructure::mixed(s, read_vector(o.phi));
    }
    require(structure->dim() == static_cast<std::size_t>(delta.size()), ErrorKind::DimensionMismatch,
            "change and covariance dimensions differ");
    std::optional<Projection> p;
    if (!o.direction.empty()) {
        const Matrix sigma = covariance(*structure);
        if (o.direction == "oracle") p = oracle(sigma, delta);
        else if (o.direction == "pre-oracle") p = pre_oracle(delta);
        else if (o.direction == "quasi") p = quasi_oracle(sigma.diagonal(), delta);
        else if (o.direction == "flat") p = custom(Vector::Ones(delta.size()));
        else p = custom(read_vector(o.direction));
    }
    const EfficiencyReport r = efficiency_report(delta, *structure, p);
    if (r.e1) out << "e1=" << num(*r.e1) << '\n';
    out << "e_oracle=" << num(r.e_oracle) << '\n' << "e2=" << num(r.e2) << '\n';
    if (r.e3) out << "e3=" << num(*r.e3) << '\n' << "A_d=" << num(*r.a_d) << '\n';
    out << "cone_halfangle=" << num(r.cone_halfangle) << '\n';
    return kExitAccept;
}

struct FigureOptions {
    int figure = 0;
    std::string out_dir = "results";
    std::size_t d = 0;
    std::size_t T = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 1;
    double level = 0.05;
    std::vector<double> sweep;
    double change_norm = 0.0;
    std::string variance;
    std::vector<std::string> methods;
    std::size_t law_reps = 0;
};

int cmd_figures(const FigureOptions& o, const CLI::App& cmd, std::ostream& out) {
    ExperimentConfig c = default_config(o.figure);
    if (cmd.count("--d")) c.d = o.d;
    if (cmd.count("--T")) c.T = o.T;
    if (cmd.count("--reps")) c.reps = o.reps;
    if (cmd.count("--seed")) c.seed = o.seed;
    if (cmd.count("--level")) c.level = o.level;
    if (cmd.count("--sweep")) c.sweep = o.sweep;
    if (cmd.count("--change-norm")) c.change_norm = o.change_norm;
    if (cmd.count("--variance")) c.variance = parse_variance_policy(o.variance);
    if (cmd.count("--law-reps")) c.law_reps = o.law_reps;
    if (cmd.count("--methods")) {
        c.methods.clear();
        for (const auto& m : o.methods) c.methods.push_back(parse_method(m));
    }
    for (const auto& path : run_figure(o.figure, c, o.out_dir)) out << path.string() << '\n';
    return kExitAccept;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Projection and panel change-point tests for high-dimensional series", "hdcp"};
    app.set_config("--config", "", "key=value config file; command-line flags take precedence");
    app.require_subcommand(1);

    DetectorOptions test_opts;
    auto* test = app.add_subcommand("test", "Run a change-point test on a CSV panel");
    add_detector_options(test, test_opts);

    DetectorOptions seg_opts;
    std::size_t min_segment = 10;
    bool fuller = false;
    double tau_f = 0.02;
    auto* seg = app.add_subcommand("segment", "Binary segmentation of a CSV panel");
    add_detector_options(seg, seg_opts);
    seg->add_option("--min-segment", min_segment, "Shortest segment on either side of a split")
        ->capture_default_str();
    seg->add_flag("--fuller", fuller, "Apply the Fuller log-squared-return transform per column");
    seg->add_option("--tau-f", tau_f, "Perturbation factor of the Fuller transform")
        ->capture_default_str();

    std::string law = "bridge-sup";
    std::vector<double> alphas{0.01, 0.05, 0.1};
    NullOptions crit_opts;
    std::string crit_out;
    auto* crit = app.add_subcommand("critval", "Simulate a quantile table of a limit law");
    crit->add_option("--law", law, "Law descriptor, e.g. bridge-sup, panel-sup, bridge-int:beta=0.25")
        ->capture_default_str();
    crit->add_option("--alpha", alphas, "Levels")->capture_default_str();
    add_null_options(crit, crit_opts);
    crit->add_option("-o,--out", crit_out, "Output file (default: stdout, or the cache)");

    EfficiencyOptions eff_opts;
    auto* eff = app.add_subcommand("efficiency", "Analytic efficiencies for a change and covariance");
    eff->add_option("--delta", eff_opts.delta, "Change vector file")->required();
    eff->add_option("--sigma", eff_opts.sigma, "Covariance matrix file");
    eff->add_option("--s", eff_opts.s, "Idiosyncratic loadings file");
    eff->add_option("--phi", eff_opts.phi, "Common factor loadings file");
    eff->add_option("--direction", eff_opts.direction,
                    "Projection: file, or oracle | pre-oracle | quasi | flat");

    FigureOptions fig_opts;
    auto* fig = app.add_subcommand("figures", "Run a simulation study and write CSV results");
    fig->add_option("--figure", fig_opts.figure, "Figure 1..5")->required()->check(CLI::Range(1, 5));
    fig->add_option("-o,--out", fig_opts.out_dir, "Output directory")->capture_default_str();
    fig->add_option("--d", fig_opts.d, "Dimension");
    fig->add_option("--T", fig_opts.T, "Sample length");
    fig->add_option("--reps", fig_opts.reps, "Replications");
    fig->add_option("--seed", fig_opts.seed, "Master seed");
    fig->add_option("--level", fig_opts.level, "Test level");
    fig->add_option("--sweep", fig_opts.sweep, "Sweep values");
    fig->add_option("--change-norm", fig_opts.change_norm, "||delta||");
    fig->add_option("--variance", fig_opts.variance, "known | naive | split")
        ->check(CLI::IsMember({"known", "naive", "split"}));
    fig->add_option("--methods", fig_opts.methods,
                    "oracle quasi-oracle pre-oracle random search panel-known panel-est");
    fig->add_option("--law-reps", fig_opts.law_reps, "Paths for asymptotic critical values");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitAccept : kExitError;
    }

    try {
        if (*test) return cmd_test(test_opts, out);
        if (*seg) return cmd_segment(seg_opts, min_segment, fuller, tau_f, out);
        if (*crit) return cmd_critval(law, alphas, crit_opts, crit_out, out);
        if (*eff) return cmd_efficiency(eff_opts, out);
        if (*fig) return cmd_figures(fig_opts, *fig, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace hdcp::cli
