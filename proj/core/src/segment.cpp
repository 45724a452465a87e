#include "hdcp/segment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hdcp/error.hpp"

namespace hdcp {

std::vector<double> fuller_transform(const std::vector<double>& prices, double tau_f) {
    require(prices.size() >= 3, ErrorKind::InvalidArgument, "need at least 3 prices");
    require(tau_f > 0.0 && std::isfinite(tau_f), ErrorKind::InvalidArgument, "tau_f must be > 0");
    for (double p : prices) {
        require(p > 0.0 && std::isfinite(p), ErrorKind::NonPositivePrice,
                "prices must be positive and finite");
    }
    std::vector<double> r(prices.size() - 1);
    for (std::size_t t = 1; t < prices.size(); ++t) r[t - 1] = std::log(prices[t] / prices[t - 1]);
    const double n = static_cast<double>(r.size());
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : r) ss += (v - mean) * (v - mean);
    const double c = tau_f * ss / (n - 1.0);

    std::vector<double> y(r.size());
    for (std::size_t t = 0; t < r.size(); ++t) {
        const double a = r[t] * r[t] + c;
        // c == 0 only for constant prices; log(0) is then replaced by a constant.
        y[t] = a > 0.0 ? std::log(a) - c / a : 0.0;
    }
    return y;
}

std::vector<std::size_t> SegmentationResult::locations() const {
    std::vector<std::size_t> out;
    out.reserve(changes.size());
    for (const auto& c : changes) out.push_back(c.location);
    return out;
}

namespace {

struct Segmenter {
    const PanelSeries& x;
    const Detector& tester;
    double level;
    std::size_t min_segment;
    std::vector<DetectedChange> found;

    void visit(std::size_t begin, std::size_t end, std::size_t depth) {
        const std::size_t n = end - begin;
        if (n < 2 * min_segment) return;
        TestResult r;
        try {
            r = tester.run(x.window(begin, end), min_segment);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::ZeroVariance || e.kind() == ErrorKind::AllZero) return;
            throw;
        }
        if (!(r.p_value <= level) || !r.changepoint_index) return;
        const std::size_t k = *r.changepoint_index;
        found.push_back({begin + k, r.statistic, r.p_value, depth, found.size()});
        visit(begin, begin + k, depth + 1);
        visit(begin + k, end, depth + 1);
    }
};

}  // namespace

SegmentationResult binary_segmentation(const PanelSeries& x, const Detector& tester, double level,
                                       std::size_t min_segment) {
    require(min_segment >= 5, ErrorKind::InvalidArgument, "min_segment must be >= 5");
    require(level > 0.0 && level < 1.0, ErrorKind::InvalidArgument, "level must lie in (0,1)");
    require(x.dim() == tester.dim(), ErrorKind::DimensionMismatch,
            "tester and data dimensions differ");
    Segmenter s{x, tester, level, min_segment, {}};
    s.visit(0, x.length(), 0);
    std::sort(s.found.begin(), s.found.end(),
              [](const DetectedChange& a, const DetectedChange& b) { return a.location < b.location; });
    return {std::move(s.found)};
}

}  // namespace hdcp
