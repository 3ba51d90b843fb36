#pragma once

#include <array>
#include <string_view>

#include "fundusquant/components.hpp"
#include "fundusquant/config.hpp"
#include "fundusquant/fundus_context.hpp"
#include "fundusquant/taxonomy.hpp"

namespace fundusquant {

enum class SeverityGrade { None = 0, Mild = 1, Moderate = 2, Severe = 3 };
std::string_view to_string(SeverityGrade g) noexcept;

/// Coverage grade: none at 0, then mild below bins[0], moderate below bins[1], severe otherwise.
/// Throws BadBins unless 0 < bins[0] < bins[1].
SeverityGrade severity_grade(double coverage, const std::array<double, 2>& bins);

struct SizeHistogram {
    std::size_t small = 0, medium = 0, large = 0;
    std::size_t total() const noexcept { return small + medium + large; }
    bool operator==(const SizeHistogram&) const = default;
};

/// Four counts. In axis-aligned mode the slots are superior-nasal, superior-temporal,
/// inferior-nasal, inferior-temporal. In diagonal mode they are superior, inferior, nasal,
/// temporal. Without laterality "nasal" reads as image-right and "temporal" as image-left.
struct QuadrantCounts {
    QuadrantMode mode = QuadrantMode::AxisAligned;
    std::array<std::size_t, 4> counts{};
    bool oriented = false;
    /// Quadrants centred on the FOV centroid because no fovea was available.
    bool centered_on_fov = false;

    std::size_t total() const noexcept { return counts[0] + counts[1] + counts[2] + counts[3]; }
    /// Labels for the four slots, e.g. SN/ST/IN/IT or SR/SL/IR/IL.
    std::array<std::string_view, 4> labels() const noexcept;
};

/// Components with a centroid outside the FOV are not counted.
QuadrantCounts quadrant_counts(const ComponentSet& components, const FundusContext& ctx,
                               QuadrantMode mode = QuadrantMode::AxisAligned);

struct LesionStats {
    TargetClass target;
    std::size_t count = 0;
    std::size_t total_area_px = 0;
    double coverage_ratio = 0.0;
    SizeHistogram size_histogram;
    /// Means over components; absent when the mask is empty.
    std::optional<double> mean_circularity;
    std::optional<double> mean_aspect_ratio;
    QuadrantCounts quadrants;
    SeverityGrade severity = SeverityGrade::None;
    /// Set when disc-relative bins were requested but no disc was available,
    /// in which case absolute pixel bins were used.
    bool size_bins_fell_back = false;
};

/// Throws NoContext when the FOV is empty.
LesionStats lesion_stats(const BinaryMask& mask, const TargetClass& target, const FundusContext& ctx,
                         const LesionConfig& cfg = {});

/// |mask ∩ fov| / |fov|.
double coverage_ratio(const BinaryMask& mask, const BinaryMask& fov);

}  // namespace fundusquant
