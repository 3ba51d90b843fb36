#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace fundusquant {

enum class Laterality { OD, OS, Unknown };
std::string_view to_string(Laterality l) noexcept;
Laterality parse_laterality(std::string_view s);

enum class TortuosityMode { ArcChord, Curvature };
enum class SizeBinMode { DiscRelative, AbsolutePixels };
enum class QuadrantMode { AxisAligned, Diagonal };
enum class DispersionWeighting { Uniform, Area };
enum class VerticalCdrMode { AxisAligned, Caliper };

struct VesselConfig {
    double annulus_inner = 1.5;
    double annulus_outer = 2.0;
    double knudtson_artery = 0.88;
    double knudtson_vein = 0.95;
    double min_branch_len_px = 10.0;
    int min_zone_samples = 5;
    TortuosityMode tortuosity_mode = TortuosityMode::ArcChord;
    bool operator==(const VesselConfig&) const = default;
};

struct OpticConfig {
    double ray_step_deg = 1.0;
    /// Superior starts at [0], image-left at [1], inferior at [2], image-right at [3]
    /// (degrees counter-clockwise from +x with anatomical up).
    std::array<double, 4> sector_boundaries_deg{45.0, 135.0, 225.0, 315.0};
    VerticalCdrMode cdr_mode = VerticalCdrMode::AxisAligned;
    bool operator==(const OpticConfig&) const = default;
};

struct LesionConfig {
    SizeBinMode size_mode = SizeBinMode::DiscRelative;
    std::array<double, 2> size_bins_frac_da{0.01, 0.05};
    std::array<double, 2> size_bins_px{50.0, 500.0};
    /// Non-clinical defaults.
    std::array<double, 2> severity_bins{0.005, 0.02};
    QuadrantMode quadrant_mode = QuadrantMode::AxisAligned;
    bool operator==(const LesionConfig&) const = default;
};

struct PhenotypeConfig {
    DispersionWeighting dispersion_weighting = DispersionWeighting::Uniform;
    bool operator==(const PhenotypeConfig&) const = default;
};

struct CurationConfig {
    double threshold = 0.75;
    double min_largest_fraction = 0.5;
    int min_fragment_area = 10;
    int max_fragments = 20;
    double spur_length_px = 10.0;
    int max_spurs = 30;
    bool operator==(const CurationConfig&) const = default;
};

struct LateralityConfig {
    /// Eye reported when the disc lies to the right of the fovea in the image.
    Laterality disc_right_of_fovea = Laterality::OD;
    bool operator==(const LateralityConfig&) const = default;
};

struct Config {
    VesselConfig vessel;
    OpticConfig optic;
    LesionConfig lesion;
    PhenotypeConfig phenotype;
    CurationConfig curation;
    LateralityConfig laterality;

    bool operator==(const Config&) const = default;

    /// Full effective configuration, every key present.
    nlohmann::json to_json() const;
    /// Missing keys keep their defaults; unknown keys and invalid values throw ConfigError.
    static Config from_json(const nlohmann::json& j);
    static Config load(const std::filesystem::path& path);
    void validate() const;

    /// 64-bit FNV-1a of the canonical effective-config JSON, as 16 hex digits.
    std::string fingerprint() const;
};

}  // namespace fundusquant
