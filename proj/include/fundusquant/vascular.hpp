#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fundusquant/config.hpp"
#include "fundusquant/fundus_context.hpp"
#include "fundusquant/raster.hpp"
#include "fundusquant/skeleton.hpp"

namespace fundusquant {

struct MeasurementZone {
    double inner_factor = 1.5;
    double outer_factor = 2.0;
    Point center;
    double disc_radius = 0.0;
    BinaryMask annulus;
};

/// Pixels with inner*r <= |p - c| <= outer*r, intersected with the FOV. Throws DegenerateZone.
MeasurementZone measurement_annulus(Point center, double disc_radius, const BinaryMask& fov, double inner_factor = 1.5,
                                    double outer_factor = 2.0);
MeasurementZone measurement_annulus(const FundusContext& ctx, const VesselConfig& cfg = {});

struct VesselWidthSample {
    std::size_t branch = 0;
    double position = 0.0;  // arc length from the start of the branch polyline
    double width = 0.0;     // 2 x distance transform at the centreline pixel
    Pixel pixel;
};

struct BranchWidths {
    std::size_t branch = 0;
    std::vector<VesselWidthSample> samples;
    double median_width = 0.0;
};

/// Centreline width samples inside the zone, grouped by skeleton branch; branches with fewer
/// than `min_samples` in-zone samples are dropped. Throws NoVesselInZone.
std::vector<BranchWidths> sample_widths(const BinaryMask& vessel, const MeasurementZone& zone, int min_samples = 5);
/// Same, reusing a skeleton graph and the distance map of the mask it was built from.
std::vector<BranchWidths> sample_widths(const SkeletonGraph& graph, const RealRaster& edt, const MeasurementZone& zone,
                                        int min_samples = 5);

double median(std::vector<double> values);

/// Revised Knudtson summary: keeps the six largest widths (padding with the median when fewer),
/// then repeatedly pairs largest with smallest via c * sqrt(a^2 + b^2), carrying the middle value
/// of odd-sized rounds, until one value remains. Throws InsufficientVessels.
double knudtson_equivalent(std::span<const double> widths, double coefficient, std::size_t* n_used = nullptr);

struct CaliberSummary {
    double crae = 0.0;
    double crve = 0.0;
    double avr = 0.0;
    std::size_t n_arteries_used = 0;
    std::size_t n_veins_used = 0;
};

/// Inputs are per-branch median widths. Throws InsufficientVessels naming the empty side.
CaliberSummary caliber_summary(std::span<const double> artery_widths, std::span<const double> vein_widths,
                               const VesselConfig& cfg = {});

/// Box sizes 2, 4, 8, ... up to min(W, H) / 4 on a grid anchored at (0, 0); slope of the least
/// squares fit of log N(s) against log(1/s). Throws TooSmall.
double box_counting_fd(const BinaryMask& mask);

/// Arc-length-weighted mean of per-branch arc/chord ratios (or mean squared curvature density in
/// curvature mode) over branches of at least `min_branch_len_px`. When a zone is given only
/// branches touching it count. Throws NoBranches.
double tortuosity(const SkeletonGraph& graph, const MeasurementZone* zone = nullptr, const VesselConfig& cfg = {});

/// Per-branch arc/chord ratios of qualifying branches (open branches only).
std::vector<double> branch_tortuosities(const SkeletonGraph& graph, const MeasurementZone* zone, double min_len);

}  // namespace fundusquant
