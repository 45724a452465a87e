#include "hdcp/error.hpp"

namespace hdcp {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::ZeroChange: return "ZeroChange";
        case ErrorKind::NonPositiveVariance: return "NonPositiveVariance";
        case ErrorKind::DegenerateProjection: return "DegenerateProjection";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::AllZero: return "AllZero";
        case ErrorKind::NotProportional: return "NotProportional";
        case ErrorKind::ZeroDependence: return "ZeroDependence";
        case ErrorKind::NonPositivePrice: return "NonPositivePrice";
        case ErrorKind::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hdcp
