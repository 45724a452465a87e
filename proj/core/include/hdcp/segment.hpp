#pragma once

// Binary segmentation and the Fuller log-squared-return transform.

#include <cstddef>
#include <vector>

#include "hdcp/detector.hpp"
#include "hdcp/model.hpp"

namespace hdcp {

// y_t = log(r_t^2 + c) - c / (r_t^2 + c) with r_t = log(P_t / P_{t-1}),
// c = tau_f * s^2 and s^2 the sample variance (n - 1) of the returns.
// Returns T - 1 values.
[[nodiscard]] std::vector<double> fuller_transform(const std::vector<double>& prices,
                                                   double tau_f = 0.02);

struct DetectedChange {
    std::size_t location;  // last time index (1-based) before the change
    double statistic;
    double p_value;
    std::size_t depth;  // 0 for the first split of the full series
    std::size_t order;  // detection order in the depth-first recursion
};

struct SegmentationResult {
    std::vector<DetectedChange> changes;  // sorted by location

    [[nodiscard]] std::vector<std::size_t> locations() const;
};

// Tests the series; on p_value <= level splits at the estimated change (which
// stays in the left part) and recurses on both parts. Segments shorter than
// 2 * min_segment are not tested. A segment whose variance estimate vanishes
// is treated as having no change.
[[nodiscard]] SegmentationResult binary_segmentation(const PanelSeries& x, const Detector& tester,
                                                     double level, std::size_t min_segment = 10);

}  // namespace hdcp
