#include "fundusquant/optic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fundusquant/components.hpp"
#include "fundusquant/hull.hpp"

namespace fundusquant {

namespace {

struct Extents {
    double h = 0.0, v = 0.0;
};

Extents axis_extents(const std::vector<Pixel>& polygon) {
    int min_x = polygon[0].x, max_x = min_x, min_y = polygon[0].y, max_y = min_y;
    for (const auto& p : polygon) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    return {static_cast<double>(max_x - min_x + 1), static_cast<double>(max_y - min_y + 1)};
}

// Caliper variant: width of the hull projected on the principal axis (h) and its normal (v).
Extents caliper_extents(const std::vector<Pixel>& polygon, double orientation_deg) {
    const double t = orientation_deg * std::numbers::pi / 180.0;
    const double ux = std::cos(t), uy = -std::sin(t);
    double a_lo = 1e300, a_hi = -1e300, b_lo = 1e300, b_hi = -1e300;
    for (const auto& p : polygon) {
        const double a = p.x * ux + p.y * uy;
        const double b = -p.x * uy + p.y * ux;
        a_lo = std::min(a_lo, a);
        a_hi = std::max(a_hi, a);
        b_lo = std::min(b_lo, b);
        b_hi = std::max(b_hi, b);
    }
    return {a_hi - a_lo + 1.0, b_hi - b_lo + 1.0};
}

Point centroid_of(const BinaryMask& m) {
    double sx = 0.0, sy = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
        }
    }
    return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

}  // namespace

DiscCupGeometry disc_cup_geometry(const BinaryMask& disc, const BinaryMask& cup, VerticalCdrMode mode) {
    require_same_shape(disc, cup);
    if (disc.empty()) throw Error(ErrorCode::NoDisc, "disc mask is empty");

    DiscCupGeometry g{.disc_hull = convex_hull_mask(disc), .cup_hull = BinaryMask(disc.width(), disc.height())};
    g.disc_polygon = convex_hull(g.disc_hull.pixels());
    g.disc_area = g.disc_hull.count();
    g.disc_center = centroid_of(g.disc_hull);
    const auto disc_pixels = g.disc_hull.pixels();
    g.orientation_disc = moment_ellipse(disc_pixels).orientation_deg;
    Extents de = mode == VerticalCdrMode::Caliper ? caliper_extents(g.disc_polygon, g.orientation_disc) : axis_extents(g.disc_polygon);
    g.disc_h_diameter = de.h;
    g.disc_v_diameter = de.v;

    if (!cup.empty()) {
        const BinaryMask raw_cup_hull = convex_hull_mask(cup);
        g.cup_hull = raw_cup_hull & g.disc_hull;
        g.cup_clipped = g.cup_hull.count() != raw_cup_hull.count();
        g.cup_area = g.cup_hull.count();
        if (g.cup_area > 0) {
            const auto cup_pixels = g.cup_hull.pixels();
            g.cup_polygon = convex_hull(cup_pixels);
            g.orientation_cup = moment_ellipse(cup_pixels).orientation_deg;
            // caliper cup extents follow the disc axis so the ratio compares like with like
            Extents ce = mode == VerticalCdrMode::Caliper ? caliper_extents(g.cup_polygon, g.orientation_disc) : axis_extents(g.cup_polygon);
            g.cup_h_diameter = ce.h;
            g.cup_v_diameter = ce.v;
        }
    }
    return g;
}

CupDiscRatios cdr(const DiscCupGeometry& g) {
    if (!g.has_cup()) throw Error(ErrorCode::NoCup, "cup mask is empty");
    CupDiscRatios r;
    r.h_cdr = std::min(1.0, g.cup_h_diameter / g.disc_h_diameter);
    r.v_cdr = std::min(1.0, g.cup_v_diameter / g.disc_v_diameter);
    r.area_cdr = static_cast<double>(g.cup_area) / static_cast<double>(g.disc_area);
    return r;
}

namespace {

// Distance along the ray at which it leaves the convex polygon; degenerate hulls
// (fewer than three vertices) are treated as having no extent.
double exit_distance(const std::vector<Pixel>& polygon, Point o, double dx, double dy) {
    auto t = ray_exit_distance(polygon, o, dx, dy);
    return t ? *t : 0.0;
}

bool ray_stays_in_fov(const BinaryMask& fov, Point o, double dx, double dy, double t_end) {
    for (double t = 0.0; t <= t_end; t += 0.5) {
        const int x = static_cast<int>(std::lround(o.x + t * dx));
        const int y = static_cast<int>(std::lround(o.y + t * dy));
        if (!fov.test(x, y)) return false;
    }
    return true;
}

enum Sector { Superior = 0, Left = 1, Inferior = 2, Right = 3 };

Sector sector_of(double angle_deg, const std::array<double, 4>& b) {
    // rotate so the superior start sits at 0
    double a = std::fmod(angle_deg - b[0], 360.0);
    if (a < 0.0) a += 360.0;
    if (a < b[1] - b[0]) return Superior;
    if (a < b[2] - b[0]) return Left;
    if (a < b[3] - b[0]) return Inferior;
    return Right;
}

}  // namespace

RimProfile isnt(const DiscCupGeometry& g, Laterality laterality, const OpticConfig& cfg, const BinaryMask* fov,
                Laterality disc_right_convention) {
    if (!g.has_cup()) throw Error(ErrorCode::NoCup, "cup mask is empty");
    RimProfile rim;
    std::array<double, 4> sum{};
    std::array<std::size_t, 4> count{};
    double all = 0.0;

    const int steps = static_cast<int>(std::lround(360.0 / cfg.ray_step_deg));
    for (int k = 0; k < steps; ++k) {
        const double deg = (k + 0.5) * 360.0 / steps;
        const double rad = deg * std::numbers::pi / 180.0;
        // counter-clockwise with anatomical up, i.e. toward -y in the raster
        const double dx = std::cos(rad), dy = -std::sin(rad);
        const double t_disc = exit_distance(g.disc_polygon, g.disc_center, dx, dy);
        if (fov && !ray_stays_in_fov(*fov, g.disc_center, dx, dy, t_disc)) {
            ++rim.ray_misses;
            continue;
        }
        const double t_cup = exit_distance(g.cup_polygon, g.disc_center, dx, dy);
        const double width = std::max(0.0, t_disc - t_cup);
        const Sector s = sector_of(deg, cfg.sector_boundaries_deg);
        sum[s] += width;
        ++count[s];
        all += width;
        ++rim.rays_used;
    }
    auto mean = [&](Sector s) { return count[s] ? sum[s] / static_cast<double>(count[s]) : 0.0; };
    rim.superior = mean(Superior);
    rim.inferior = mean(Inferior);
    rim.image_left = mean(Left);
    rim.image_right = mean(Right);
    rim.mean_all_rays = rim.rays_used ? all / static_cast<double>(rim.rays_used) : 0.0;

    if (laterality != Laterality::Unknown) {
        const bool nasal_right = laterality == disc_right_convention;
        rim.nasal = nasal_right ? rim.image_right : rim.image_left;
        rim.temporal = nasal_right ? rim.image_left : rim.image_right;
        rim.isnt_satisfied = rim.inferior >= rim.superior && rim.superior >= *rim.nasal && *rim.nasal >= *rim.temporal;
    }
    return rim;
}

}  // namespace fundusquant
