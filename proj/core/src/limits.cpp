#include "hdcp/limits.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "hdcp/error.hpp"

namespace hdcp {

namespace {

struct KindName {
    LimitKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {LimitKind::BridgeSup, "bridge-sup"},
    {LimitKind::BridgeInt, "bridge-int"},
    {LimitKind::BridgeAbsInt, "bridge-abs-int"},
    {LimitKind::BridgeSquaredSup, "bridge-squared-sup"},
    {LimitKind::EpidemicSup, "epidemic-sup"},
    {LimitKind::EpidemicInt, "epidemic-int"},
    {LimitKind::PanelSup, "panel-sup"},
    {LimitKind::PanelInt, "panel-int"},
    {LimitKind::MixturePanel, "mixture-panel"},
    {LimitKind::Constant, "constant"},
};

bool is_weighted(LimitKind kind) {
    return kind == LimitKind::BridgeSup || kind == LimitKind::BridgeInt ||
           kind == LimitKind::BridgeAbsInt;
}

// Shortest text that reads back to the same double.
std::string format_number(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_number(std::string_view text) {
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    require(end != s.c_str() && *end == '\0', ErrorKind::MalformedInput,
            "cannot parse number '" + s + "'");
    return v;
}

// Brownian bridge on k/N, k = 0..N (b[0] = b[N] = 0).
void fill_bridge(std::vector<double>& b, std::size_t grid, Rng& rng) {
    b.assign(grid + 1, 0.0);
    const double sd = 1.0 / std::sqrt(static_cast<double>(grid));
    for (std::size_t k = 1; k <= grid; ++k) b[k] = b[k - 1] + sd * rng.normal();
    const double end = b[grid];
    const double n = static_cast<double>(grid);
    for (std::size_t k = 1; k <= grid; ++k) b[k] -= (static_cast<double>(k) / n) * end;
    b[grid] = 0.0;
}

// sqrt(2)(1-x)^2 W(x^2/(1-x)^2) on k/N, k = 0..N (p[0] = p[N] = 0).
void fill_panel(std::vector<double>& p, std::size_t grid, Rng& rng) {
    p.assign(grid + 1, 0.0);
    const double n = static_cast<double>(grid);
    double w = 0.0;
    double prev_time = 0.0;
    for (std::size_t k = 1; k < grid; ++k) {
        const double x = static_cast<double>(k) / n;
        const double time = (x * x) / ((1.0 - x) * (1.0 - x));
        w += std::sqrt(time - prev_time) * rng.normal();
        prev_time = time;
        p[k] = std::sqrt(2.0) * (1.0 - x) * (1.0 - x) * w;
    }
}

// Exact extremes of the bridge between nodes: {max over path, min over path}.
std::pair<double, double> refined_extremes(const std::vector<double>& b, std::size_t grid, Rng& rng) {
    const double h = 1.0 / static_cast<double>(grid);
    double hi = 0.0;
    double lo = 0.0;
    for (std::size_t k = 1; k <= grid; ++k) {
        const double a = b[k - 1];
        const double c = b[k];
        const double gap = (a - c) * (a - c);
        const double up = 0.5 * (a + c + std::sqrt(gap - 2.0 * h * std::log(rng.uniform_open())));
        const double down = 0.5 * (a + c - std::sqrt(gap - 2.0 * h * std::log(rng.uniform_open())));
        hi = std::max(hi, up);
        lo = std::min(lo, down);
    }
    return {hi, lo};
}

double pairwise_abs_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += values[i] * (2.0 * static_cast<double>(i) - n + 1.0);
    }
    return acc;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string LimitLaw::descriptor() const {
    std::string out;
    for (const auto& entry : kKindNames) {
        if (entry.kind == kind) out = entry.name;
    }
    if (is_weighted(kind) && beta != 0.0) out += ":beta=" + format_number(beta);
    if (kind == LimitKind::MixturePanel) out += ":xi=" + format_number(xi);
    if (kind == LimitKind::Constant) out += ":value=" + format_number(value);
    if (grid_only) out += ":grid-only";
    return out;
}

LimitLaw LimitLaw::parse(std::string_view text) {
    LimitLaw law;
    std::size_t pos = text.find(':');
    const std::string_view head = text.substr(0, pos);
    bool found = false;
    for (const auto& entry : kKindNames) {
        if (entry.name == head) {
            law.kind = entry.kind;
            found = true;
        }
    }
    require(found, ErrorKind::MalformedInput, "unknown limit law '" + std::string(head) + "'");
    while (pos != std::string_view::npos) {
        const std::size_t next = text.find(':', pos + 1);
        const std::string_view option = text.substr(pos + 1, next == std::string_view::npos
                                                                 ? std::string_view::npos
                                                                 : next - pos - 1);
        pos = next;
        if (option == "grid-only") {
            law.grid_only = true;
            continue;
        }
        const std::size_t eq = option.find('=');
        require(eq != std::string_view::npos, ErrorKind::MalformedInput,
                "bad law option '" + std::string(option) + "'");
        const std::string_view key = option.substr(0, eq);
        const double v = parse_number(option.substr(eq + 1));
        if (key == "beta") law.beta = v;
        else if (key == "xi") law.xi = v;
        else if (key == "value") law.value = v;
        else fail(ErrorKind::MalformedInput, "unknown law option '" + std::string(key) + "'");
    }
    validate(law);
    return law;
}

void validate(const LimitLaw& law) {
    require(law.beta >= 0.0 && law.beta < 0.5, ErrorKind::InvalidArgument,
            "weight exponent must lie in [0, 1/2)");
    require(law.beta == 0.0 || is_weighted(law.kind), ErrorKind::InvalidArgument,
            "only bridge laws take a weight");
    require(law.xi >= 0.0 && std::isfinite(law.xi), ErrorKind::InvalidArgument, "xi must be >= 0");
    require(std::isfinite(law.value), ErrorKind::InvalidArgument, "constant must be finite");
}

void validate(const SimulationSettings& settings) {
    require(settings.grid >= 100, ErrorKind::InvalidArgument, "limit-law grid must be >= 100");
    require(settings.reps >= 1000, ErrorKind::InvalidArgument, "limit-law reps must be >= 1000");
}

std::vector<double> brownian_bridge(std::size_t grid, Rng& rng) {
    require(grid >= 2, ErrorKind::InvalidArgument, "grid must be >= 2");
    std::vector<double> b;
    fill_bridge(b, grid, rng);
    return b;
}

std::vector<double> panel_process(std::size_t grid, Rng& rng) {
    require(grid >= 2, ErrorKind::InvalidArgument, "grid must be >= 2");
    std::vector<double> p;
    fill_panel(p, grid, rng);
    return p;
}

double simulate_path(const LimitLaw& law, std::size_t grid, Rng& rng) {
    require(grid >= 2, ErrorKind::InvalidArgument, "grid must be >= 2");
    thread_local std::vector<double> path;
    thread_local std::vector<double> extra;
    const double n = static_cast<double>(grid);
    const double beta = law.beta;
    auto weight = [beta](double x) { return beta == 0.0 ? 1.0 : std::pow(x * (1.0 - x), -beta); };

    switch (law.kind) {
        case LimitKind::Constant: return law.value;

        case LimitKind::BridgeSup: {
            fill_bridge(path, grid, rng);
            if (beta == 0.0 && !law.grid_only) {
                const auto [hi, lo] = refined_extremes(path, grid, rng);
                return std::max(hi, -lo);
            }
            double best = 0.0;
            for (std::size_t k = 1; k < grid; ++k) {
                best = std::max(best, weight(static_cast<double>(k) / n) * std::abs(path[k]));
            }
            return best;
        }
        case LimitKind::BridgeInt:
        case LimitKind::BridgeAbsInt: {
            fill_bridge(path, grid, rng);
            double acc = 0.0;
            for (std::size_t k = 1; k < grid; ++k) {
                const double wb = weight(static_cast<double>(k) / n) * std::abs(path[k]);
                acc += law.kind == LimitKind::BridgeInt ? wb * wb : wb;
            }
            return acc / n;
        }
        case LimitKind::BridgeSquaredSup: {
            fill_bridge(path, grid, rng);
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 1; k < grid; ++k) {
                const double x = static_cast<double>(k) / n;
                best = std::max(best, path[k] * path[k] - x * (1.0 - x));
            }
            return best;
        }
        case LimitKind::EpidemicSup: {
            fill_bridge(path, grid, rng);
            if (!law.grid_only) {
                const auto [hi, lo] = refined_extremes(path, grid, rng);
                return hi - lo;
            }
            const auto [lo, hi] = std::minmax_element(path.begin(), path.end());
            return *hi - *lo;
        }
        case LimitKind::EpidemicInt: {
            fill_bridge(path, grid, rng);
            extra.assign(path.begin() + 1, path.end());
            return pairwise_abs_sum(extra) / (n * n);
        }
        case LimitKind::PanelSup:
        case LimitKind::PanelInt: {
            fill_panel(path, grid, rng);
            if (law.kind == LimitKind::PanelInt) {
                double acc = 0.0;
                for (std::size_t k = 1; k < grid; ++k) acc += path[k];
                return acc / n;
            }
            return *std::max_element(path.begin() + 1, path.end() - 1);
        }
        case LimitKind::MixturePanel: {
            // W and B drawn independently; see the header of limits.hpp.
            fill_panel(path, grid, rng);
            fill_bridge(extra, grid, rng);
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 1; k < grid; ++k) {
                const double x = static_cast<double>(k) / n;
                best = std::max(best, path[k] + law.xi * (extra[k] * extra[k] - x * (1.0 - x)));
            }
            return best;
        }
    }
    return 0.0;
}

std::vector<double> simulate_draws(const LimitLaw& law, const SimulationSettings& settings) {
    validate(law);
    validate(settings);
    std::vector<double> draws(settings.reps);
    parallel_for(settings.reps, [&](std::size_t i) {
        Rng rng = make_stream(settings.seed, i);
        draws[i] = simulate_path(law, settings.grid, rng);
    });
    return draws;
}

double upper_quantile(const std::vector<double>& sorted, double alpha) {
    require(alpha > 0.0 && alpha < 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
    require(!sorted.empty(), ErrorKind::InvalidArgument, "empty sample");
    const double n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

NullDistribution::NullDistribution(const LimitLaw& law, const SimulationSettings& settings)
    : NullDistribution(simulate_draws(law, settings)) {}

NullDistribution::NullDistribution(std::vector<double> draws) : sorted_(std::move(draws)) {
    std::sort(sorted_.begin(), sorted_.end());
}

double NullDistribution::quantile(double alpha) const { return upper_quantile(sorted_, alpha); }

double NullDistribution::p_value(double statistic) const {
    require(!sorted_.empty(), ErrorKind::InvalidArgument, "empty null distribution");
    std::size_t exceed = 0;
    if (std::isnan(statistic)) {
        exceed = sorted_.size();
    } else {
        const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), statistic);
        exceed = static_cast<std::size_t>(sorted_.end() - it);
    }
    return (static_cast<double>(exceed) + 1.0) / (static_cast<double>(sorted_.size()) + 1.0);
}

double quantile(const LimitLaw& law, double alpha, const SimulationSettings& settings) {
    require(alpha > 0.0 && alpha < 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
    return NullDistribution(law, settings).quantile(alpha);
}

double mc_pvalue(double statistic, const LimitLaw& law, const SimulationSettings& settings) {
    return NullDistribution(law, settings).p_value(statistic);
}

// ---------------------------------------------------------------------------

bool QuantileTable::has(double alpha) const {
    return std::any_of(levels.begin(), levels.end(),
                       [alpha](const auto& l) { return std::abs(l.first - alpha) < 1e-12; });
}

double QuantileTable::at(double alpha) const {
    for (const auto& [a, q] : levels) {
        if (std::abs(a - alpha) < 1e-12) return q;
    }
    fail(ErrorKind::InvalidArgument, "table has no entry for alpha=" + format_number(alpha));
}

void QuantileTable::write(std::ostream& out) const {
    out << "# law=" << law.descriptor() << '\n'
        << "# grid=" << settings.grid << '\n'
        << "# reps=" << settings.reps << '\n'
        << "# seed=" << settings.seed << '\n';
    for (const auto& [a, q] : levels) out << format_number(a) << ',' << format_number(q) << '\n';
}

QuantileTable QuantileTable::read(std::istream& in) {
    QuantileTable table;
    bool have_law = false;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            const std::string value = line.substr(eq + 1);
            if (key == "law") {
                table.law = LimitLaw::parse(value);
                have_law = true;
            } else if (key == "grid") {
                table.settings.grid = static_cast<std::size_t>(parse_number(value));
            } else if (key == "reps") {
                table.settings.reps = static_cast<std::size_t>(parse_number(value));
            } else if (key == "seed") {
                table.settings.seed = std::stoull(value);
            }
            continue;
        }
        const auto comma = line.find(',');
        require(comma != std::string::npos, ErrorKind::MalformedInput,
                "quantile table line '" + line + "' is not alpha,quantile");
        table.levels.emplace_back(parse_number(std::string_view(line).substr(0, comma)),
                                  parse_number(std::string_view(line).substr(comma + 1)));
    }
    require(have_law, ErrorKind::MalformedInput, "quantile table lacks a law header");
    return table;
}

QuantileTable make_table(const LimitLaw& law, std::vector<double> alphas,
                         const SimulationSettings& settings) {
    require(!alphas.empty(), ErrorKind::InvalidArgument, "no alpha levels requested");
    for (double a : alphas) {
        require(a > 0.0 && a < 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
    }
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    const NullDistribution null(law, settings);
    QuantileTable table{law, settings, {}};
    for (double a : alphas) table.levels.emplace_back(a, null.quantile(a));
    return table;
}

TableCache::TableCache(std::filesystem::path directory) : dir_(std::move(directory)) {}

std::filesystem::path TableCache::path_for(const LimitLaw& law,
                                           const SimulationSettings& settings) const {
    std::string name = law.descriptor();
    for (char& c : name) {
        if (c == ':' || c == '=') c = '_';
    }
    name += "_N" + std::to_string(settings.grid) + "_R" + std::to_string(settings.reps) + "_S" +
            std::to_string(settings.seed) + ".csv";
    return dir_ / name;
}

QuantileTable TableCache::get(const LimitLaw& law, const std::vector<double>& alphas,
                              const SimulationSettings& settings) const {
    const auto path = path_for(law, settings);
    std::vector<double> wanted = alphas;
    if (std::ifstream in{path}; in) {
        QuantileTable cached = QuantileTable::read(in);
        if (cached.law == law && cached.settings.grid == settings.grid &&
            cached.settings.reps == settings.reps && cached.settings.seed == settings.seed) {
            if (std::all_of(alphas.begin(), alphas.end(), [&](double a) { return cached.has(a); })) {
                return cached;
            }
            for (const auto& level : cached.levels) wanted.push_back(level.first);
        }
    }
    QuantileTable table = make_table(law, wanted, settings);
    std::filesystem::create_directories(dir_);
    std::ofstream out(path);
    require(static_cast<bool>(out), ErrorKind::InvalidArgument,
            "cannot write quantile table to " + path.string());
    table.write(out);
    return table;
}

std::filesystem::path default_table_dir() {
    if (const char* env = std::getenv("HDCP_TABLE_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return {};
}

}  // namespace hdcp
