#include "fundusquant/fundus_context.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fundusquant/hull.hpp"
#include "fundusquant/image_ops.hpp"

namespace fundusquant {

std::string_view to_string(Source s) noexcept {
    switch (s) {
        case Source::Provided: return "provided";
        case Source::Estimated: return "estimated";
        case Source::Unknown: return "unknown";
    }
    return "unknown";
}

Point FundusContext::fov_centroid() const {
    double sx = 0.0, sy = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < fov.height(); ++y) {
        for (int x = 0; x < fov.width(); ++x) {
            if (fov(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
        }
    }
    if (n == 0) return {(fov.width() - 1) / 2.0, (fov.height() - 1) / 2.0};
    return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

bool FundusContext::nasal_is_image_right() const noexcept {
    // The convention names the eye whose disc sits right of the fovea; the disc side is nasal.
    return laterality == disc_right_convention;
}

DiscGeometry disc_geometry(const BinaryMask& disc_mask) {
    auto pts = disc_mask.pixels();
    if (pts.empty()) throw Error(ErrorCode::NoDisc, "disc mask is empty");
    DiscGeometry g{.center = {}, .radius = 0.0, .hull = BinaryMask(disc_mask.width(), disc_mask.height()), .hull_polygon = convex_hull(std::move(pts))};
    g.hull = rasterize_convex_polygon(g.hull_polygon, disc_mask.width(), disc_mask.height());
    double sx = 0.0, sy = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < g.hull.height(); ++y) {
        for (int x = 0; x < g.hull.width(); ++x) {
            if (g.hull(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
        }
    }
    g.center = {sx / static_cast<double>(n), sy / static_cast<double>(n)};
    g.radius = std::sqrt(static_cast<double>(n) / std::numbers::pi);
    return g;
}

Point localize_fovea(const RealRaster& gray, const DiscGeometry& disc, const BinaryMask& fov) {
    if (!gray.same_shape(fov)) throw Error(ErrorCode::ShapeMismatch, "gray image and FOV differ in size");
    const double r_in = 4.0 * disc.radius;   // 2 disc diameters
    const double r_out = 6.0 * disc.radius;  // 3 disc diameters
    const Point c = disc.center;

    double fx = 0.0, fy = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < fov.height(); ++y) {
        for (int x = 0; x < fov.width(); ++x) {
            if (fov(x, y)) {
                fx += x;
                fy += y;
                ++n;
            }
        }
    }
    const double tx = n ? fx / static_cast<double>(n) - c.x : 0.0;
    const double ty = n ? fy / static_cast<double>(n) - c.y : 0.0;
    const bool sided = tx != 0.0 || ty != 0.0;

    auto in_band = [&](int x, int y) {
        const double dx = x - c.x, dy = y - c.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < r_in * r_in || d2 > r_out * r_out) return false;
        if (sided && dx * tx + dy * ty <= 0.0) return false;
        return fov(x, y) != 0;
    };

    // smooth only over the bounding box of the band pixels
    int x0 = gray.width(), x1 = -1, y0 = gray.height(), y1 = -1;
    const int bx0 = std::max(0, static_cast<int>(std::floor(c.x - r_out)));
    const int bx1 = std::min(gray.width() - 1, static_cast<int>(std::ceil(c.x + r_out)));
    const int by0 = std::max(0, static_cast<int>(std::floor(c.y - r_out)));
    const int by1 = std::min(gray.height() - 1, static_cast<int>(std::ceil(c.y + r_out)));
    for (int y = by0; y <= by1; ++y) {
        for (int x = bx0; x <= bx1; ++x) {
            if (!in_band(x, y)) continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (x1 < 0) throw Error(ErrorCode::FoveaNotFound, "search band does not intersect the field of view");

    const double sigma = std::max(disc.radius / 4.0, 0.5);
    const RealRaster smooth = masked_gaussian(gray, fov, sigma, x0, y0, x1, y1);
    double best = std::numeric_limits<double>::infinity();
    Point arg{};
    bool found = false;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (!in_band(x, y)) continue;
            if (!found || smooth(x, y) < best) {
                best = smooth(x, y);
                arg = {static_cast<double>(x), static_cast<double>(y)};
                found = true;
            }
        }
    }
    return arg;
}

Laterality determine_laterality(Point disc_center, std::optional<Point> fovea, int image_width,
                                Laterality disc_right_of_fovea) {
    const Laterality other = disc_right_of_fovea == Laterality::OD ? Laterality::OS : Laterality::OD;
    const double ref = fovea ? fovea->x : (image_width - 1) / 2.0;
    if (disc_center.x > ref) return disc_right_of_fovea;
    if (disc_center.x < ref) return other;
    return Laterality::Unknown;
}

FundusContext build_context(const BinaryMask& disc_mask, const RealRaster* gray, const ContextOverrides& overrides,
                            const Config& cfg, const BinaryMask* fov) {
    const bool has_disc = !disc_mask.empty();
    if (!has_disc && !overrides.fovea && !overrides.laterality) {
        throw Error(ErrorCode::NoDisc, "no optic disc and no geometry overrides");
    }

    FundusContext ctx{.fov = BinaryMask(disc_mask.width(), disc_mask.height())};
    ctx.disc_right_convention = cfg.laterality.disc_right_of_fovea;
    if (fov) {
        ctx.fov = *fov;
    } else if (gray) {
        ctx.fov = estimate_fov(*gray);
    } else {
        ctx.fov = ~BinaryMask(disc_mask.width(), disc_mask.height());
    }

    if (has_disc) ctx.disc = disc_geometry(disc_mask);

    if (overrides.fovea) {
        ctx.fovea = overrides.fovea;
        ctx.fovea_source = Source::Provided;
    } else if (gray && ctx.disc) {
        try {
            ctx.fovea = localize_fovea(*gray, *ctx.disc, ctx.fov);
            ctx.fovea_source = Source::Estimated;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::FoveaNotFound) throw;
        }
    }

    if (overrides.laterality) {
        ctx.laterality = *overrides.laterality;
        ctx.laterality_source = Source::Provided;
    } else if (ctx.disc) {
        ctx.laterality = determine_laterality(ctx.disc->center, ctx.fovea, disc_mask.width(), ctx.disc_right_convention);
        ctx.laterality_source = ctx.laterality == Laterality::Unknown ? Source::Unknown : Source::Estimated;
    }
    return ctx;
}

}  // namespace fundusquant
