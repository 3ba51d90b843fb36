#include "fundusquant/phenotype.hpp"

#include <cmath>
#include <numbers>

#include "fundusquant/components.hpp"
#include "fundusquant/lesion.hpp"

namespace fundusquant {

TessellationStats tessellation_stats(const BinaryMask& mask, const FundusContext& ctx, const PhenotypeConfig& cfg) {
    if (ctx.fov.empty()) throw Error(ErrorCode::NoContext, "field of view is empty");
    TessellationStats t;
    t.coverage_ratio = coverage_ratio(mask, ctx.fov);
    const ComponentSet comps = connected_components(mask, Connectivity::Eight);
    t.count = comps.size();
    if (comps.empty()) return t;

    double circ = 0.0, aspect = 0.0, wsum = 0.0, mx = 0.0, my = 0.0;
    const bool by_area = cfg.dispersion_weighting == DispersionWeighting::Area;
    for (const auto& c : comps) {
        const ShapeDescriptor d = describe_shape(c);
        circ += d.circularity;
        aspect += d.aspect_ratio;
        const double w = by_area ? static_cast<double>(c.area) : 1.0;
        mx += w * c.centroid.x;
        my += w * c.centroid.y;
        wsum += w;
    }
    const double n = static_cast<double>(comps.size());
    t.mean_circularity = circ / n;
    t.mean_aspect_ratio = aspect / n;
    if (comps.size() < 2) return t;

    mx /= wsum;
    my /= wsum;
    double ss = 0.0;
    for (const auto& c : comps) {
        const double w = by_area ? static_cast<double>(c.area) : 1.0;
        const double dx = c.centroid.x - mx, dy = c.centroid.y - my;
        ss += w * (dx * dx + dy * dy);
    }
    const double r_fov = std::sqrt(static_cast<double>(ctx.fov_area()) / std::numbers::pi);
    t.centroid_dispersion = std::sqrt(ss / wsum) / r_fov;
    return t;
}

MyopiaStats myopia_stats(const std::array<const BinaryMask*, 3>& masks, const FundusContext& ctx) {
    if (ctx.fov.empty()) throw Error(ErrorCode::NoContext, "field of view is empty");
    MyopiaStats m;
    BinaryMask all(ctx.fov.width(), ctx.fov.height());
    for (std::size_t i = 0; i < masks.size(); ++i) {
        if (!masks[i]) continue;
        const BinaryMask& mask = *masks[i];
        m.types[i].count = count_components(mask, Connectivity::Eight);
        m.types[i].area_px = mask.count();
        m.types[i].coverage_ratio = coverage_ratio(mask, ctx.fov);
        all = all | mask;
    }
    m.global_coverage = coverage_ratio(all, ctx.fov);
    return m;
}

}  // namespace fundusquant
