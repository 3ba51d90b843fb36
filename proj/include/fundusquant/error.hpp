#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fundusquant {

enum class ErrorCode {
    UnknownClass,
    RegistryError,
    ShapeMismatch,
    EmptyMask,
    NotThin,
    NoFOV,
    NoDisc,
    NoCup,
    FoveaNotFound,
    DegenerateZone,
    NoVesselInZone,
    InsufficientVessels,
    TooSmall,
    NoBranches,
    NoContext,
    BadBins,
    BadThreshold,
    AllUndefined,
    DecodeError,
    EncodeError,
    ManifestError,
    ConfigError,
};

std::string_view code_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// code name is what crosses process and language boundaries.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(code_name(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fundusquant
