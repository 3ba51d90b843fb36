#include "fundusquant/error.hpp"

namespace fundusquant {

std::string_view code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnknownClass: return "UnknownClass";
        case ErrorCode::RegistryError: return "RegistryError";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::EmptyMask: return "EmptyMask";
        case ErrorCode::NotThin: return "NotThin";
        case ErrorCode::NoFOV: return "NoFOV";
        case ErrorCode::NoDisc: return "NoDisc";
        case ErrorCode::NoCup: return "NoCup";
        case ErrorCode::FoveaNotFound: return "FoveaNotFound";
        case ErrorCode::DegenerateZone: return "DegenerateZone";
        case ErrorCode::NoVesselInZone: return "NoVesselInZone";
        case ErrorCode::InsufficientVessels: return "InsufficientVessels";
        case ErrorCode::TooSmall: return "TooSmall";
        case ErrorCode::NoBranches: return "NoBranches";
        case ErrorCode::NoContext: return "NoContext";
        case ErrorCode::BadBins: return "BadBins";
        case ErrorCode::BadThreshold: return "BadThreshold";
        case ErrorCode::AllUndefined: return "AllUndefined";
        case ErrorCode::DecodeError: return "DecodeError";
        case ErrorCode::EncodeError: return "EncodeError";
        case ErrorCode::ManifestError: return "ManifestError";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace fundusquant
