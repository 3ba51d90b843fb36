#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "fundusquant/config.hpp"
#include "fundusquant/raster.hpp"

namespace fundusquant {

enum class Source { Provided, Estimated, Unknown };
std::string_view to_string(Source s) noexcept;

struct DiscGeometry {
    Point center;
    double radius = 0.0;  // sqrt(area / pi) of the hulled disc
    BinaryMask hull;
    std::vector<Pixel> hull_polygon;
};

struct ContextOverrides {
    std::optional<Point> fovea;
    std::optional<Laterality> laterality;
};

/// Per-image geometric frame. Immutable once built.
struct FundusContext {
    BinaryMask fov;
    std::optional<DiscGeometry> disc;
    std::optional<Point> fovea;
    Laterality laterality = Laterality::Unknown;
    Source fovea_source = Source::Unknown;
    Source laterality_source = Source::Unknown;
    Laterality disc_right_convention = Laterality::OD;

    std::size_t fov_area() const { return fov.count(); }
    Point fov_centroid() const;
    bool oriented() const noexcept { return laterality != Laterality::Unknown; }
    /// True when anatomical nasal points toward +x in the image.
    bool nasal_is_image_right() const noexcept;
};

/// Argmin of the FOV-restricted Gaussian-smoothed luminance (sigma = radius / 4) inside the band
/// 2-3 disc diameters from the disc centre, on the FOV-centroid side. Ties go to the lowest
/// row-major index. Throws FoveaNotFound.
Point localize_fovea(const RealRaster& gray, const DiscGeometry& disc, const BinaryMask& fov);

/// OD when the disc lies right of the fovea (or of the image midline without a fovea) under the
/// default convention; exact ties give Unknown.
Laterality determine_laterality(Point disc_center, std::optional<Point> fovea, int image_width,
                                Laterality disc_right_of_fovea = Laterality::OD);

DiscGeometry disc_geometry(const BinaryMask& disc_mask);

/// FOV comes from `fov` when given, else from `gray`, else the full frame.
FundusContext build_context(const BinaryMask& disc_mask, const RealRaster* gray, const ContextOverrides& overrides,
                            const Config& cfg = {}, const BinaryMask* fov = nullptr);

}  // namespace fundusquant
