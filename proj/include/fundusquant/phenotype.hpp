#pragma once

#include <array>
#include <optional>

#include "fundusquant/config.hpp"
#include "fundusquant/fundus_context.hpp"

namespace fundusquant {

struct TessellationStats {
    std::size_t count = 0;
    double coverage_ratio = 0.0;
    std::optional<double> mean_circularity;
    std::optional<double> mean_aspect_ratio;
    /// RMS distance of component centroids to their mean, over sqrt(FOV area / pi). 0 with at most one component.
    double centroid_dispersion = 0.0;
};

/// Throws NoContext when the FOV is empty.
TessellationStats tessellation_stats(const BinaryMask& mask, const FundusContext& ctx, const PhenotypeConfig& cfg = {});

struct AtrophyStats {
    std::size_t count = 0;
    std::size_t area_px = 0;
    double coverage_ratio = 0.0;
};

enum class AtrophyType { Peripapillary = 0, Diffuse = 1, Patchy = 2 };

struct MyopiaStats {
    /// Indexed by AtrophyType.
    std::array<AtrophyStats, 3> types;
    /// Coverage of the pixelwise union of all supplied types.
    double global_coverage = 0.0;

    const AtrophyStats& operator[](AtrophyType t) const { return types[static_cast<std::size_t>(t)]; }
};

/// Absent masks count as empty. Throws NoContext when the FOV is empty.
MyopiaStats myopia_stats(const std::array<const BinaryMask*, 3>& masks, const FundusContext& ctx);

}  // namespace fundusquant
