#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hdcp {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NotPositiveDefinite,
    ZeroChange,
    NonPositiveVariance,
    DegenerateProjection,
    ZeroVariance,
    AllZero,
    NotProportional,
    ZeroDependence,
    NonPositivePrice,
    MalformedInput,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const std::string& what) {
    if (!condition) fail(kind, what);
}

}  // namespace hdcp
