#include "fundusquant/lesion.hpp"

#include <cmath>
#include <cstdlib>

namespace fundusquant {

std::string_view to_string(SeverityGrade g) noexcept {
    switch (g) {
        case SeverityGrade::None: return "none";
        case SeverityGrade::Mild: return "mild";
        case SeverityGrade::Moderate: return "moderate";
        case SeverityGrade::Severe: return "severe";
    }
    return "none";
}

SeverityGrade severity_grade(double coverage, const std::array<double, 2>& bins) {
    if (!(bins[0] > 0.0 && bins[0] < bins[1])) throw Error(ErrorCode::BadBins, "severity bins must satisfy 0 < b1 < b2");
    if (coverage <= 0.0) return SeverityGrade::None;
    if (coverage < bins[0]) return SeverityGrade::Mild;
    if (coverage < bins[1]) return SeverityGrade::Moderate;
    return SeverityGrade::Severe;
}

std::array<std::string_view, 4> QuadrantCounts::labels() const noexcept {
    if (mode == QuadrantMode::AxisAligned) {
        if (oriented) return {"SN", "ST", "IN", "IT"};
        return {"SR", "SL", "IR", "IL"};
    }
    if (oriented) return {"S", "I", "N", "T"};
    return {"S", "I", "R", "L"};
}

QuadrantCounts quadrant_counts(const ComponentSet& components, const FundusContext& ctx, QuadrantMode mode) {
    QuadrantCounts q;
    q.mode = mode;
    q.oriented = ctx.oriented();
    Point c;
    if (ctx.fovea) {
        c = *ctx.fovea;
    } else {
        c = ctx.fov_centroid();
        q.centered_on_fov = true;
    }
    // unoriented images use image-right in the nasal slot
    const double side_sign = (!q.oriented || ctx.nasal_is_image_right()) ? 1.0 : -1.0;

    for (const auto& comp : components) {
        const int rx = static_cast<int>(std::lround(comp.centroid.x));
        const int ry = static_cast<int>(std::lround(comp.centroid.y));
        if (!ctx.fov.test(rx, ry)) continue;
        const double up = c.y - comp.centroid.y;
        const double nasal = side_sign * (comp.centroid.x - c.x);
        std::size_t slot;
        if (mode == QuadrantMode::AxisAligned) {
            // boundary ties go to superior, then nasal
            const bool sup = up >= 0.0;
            const bool nas = nasal >= 0.0;
            slot = (sup ? 0 : 2) + (nas ? 0 : 1);
        } else {
            const double an = std::abs(nasal), au = std::abs(up);
            if (up >= an) {
                slot = 0;
            } else if (nasal >= au) {
                slot = 2;
            } else if (-up >= an) {
                slot = 1;
            } else {
                slot = 3;
            }
        }
        ++q.counts[slot];
    }
    return q;
}

double coverage_ratio(const BinaryMask& mask, const BinaryMask& fov) {
    require_same_shape(mask, fov);
    const std::size_t denom = fov.count();
    if (denom == 0) throw Error(ErrorCode::NoContext, "field of view is empty");
    return static_cast<double>((mask & fov).count()) / static_cast<double>(denom);
}

LesionStats lesion_stats(const BinaryMask& mask, const TargetClass& target, const FundusContext& ctx,
                         const LesionConfig& cfg) {
    if (ctx.fov.empty()) throw Error(ErrorCode::NoContext, "field of view is empty");
    require_same_shape(mask, ctx.fov);
    // validate bins up front so a bad config fails even on empty masks
    severity_grade(0.0, cfg.severity_bins);

    LesionStats s;
    s.target = target;
    s.coverage_ratio = coverage_ratio(mask, ctx.fov);
    s.severity = severity_grade(s.coverage_ratio, cfg.severity_bins);

    const ComponentSet comps = connected_components(mask, Connectivity::Eight);
    s.count = comps.size();
    s.quadrants = quadrant_counts(comps, ctx, cfg.quadrant_mode);
    if (comps.empty()) return s;

    double lo = cfg.size_bins_px[0], hi = cfg.size_bins_px[1];
    if (cfg.size_mode == SizeBinMode::DiscRelative) {
        if (ctx.disc) {
            const double da = static_cast<double>(ctx.disc->hull.count());
            lo = cfg.size_bins_frac_da[0] * da;
            hi = cfg.size_bins_frac_da[1] * da;
        } else {
            s.size_bins_fell_back = true;
        }
    }

    double circ = 0.0, aspect = 0.0;
    for (const auto& c : comps) {
        s.total_area_px += c.area;
        const double a = static_cast<double>(c.area);
        if (a < lo) {
            ++s.size_histogram.small;
        } else if (a < hi) {
            ++s.size_histogram.medium;
        } else {
            ++s.size_histogram.large;
        }
        const ShapeDescriptor d = describe_shape(c);
        circ += d.circularity;
        aspect += d.aspect_ratio;
    }
    const double n = static_cast<double>(comps.size());
    s.mean_circularity = circ / n;
    s.mean_aspect_ratio = aspect / n;
    return s;
}

}  // namespace fundusquant
