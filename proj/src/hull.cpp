#include "fundusquant/hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace fundusquant {

namespace {

std::int64_t cross(Pixel o, Pixel a, Pixel b) {
    return static_cast<std::int64_t>(a.x - o.x) * (b.y - o.y) - static_cast<std::int64_t>(a.y - o.y) * (b.x - o.x);
}

// floor/ceil of num/den for den != 0
std::int64_t floor_div(std::int64_t num, std::int64_t den) {
    std::int64_t q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}
std::int64_t ceil_div(std::int64_t num, std::int64_t den) { return -floor_div(-num, den); }

}  // namespace

std::vector<Pixel> convex_hull(std::vector<Pixel> pts) {
    std::sort(pts.begin(), pts.end(), [](Pixel a, Pixel b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;

    std::vector<Pixel> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() == 2 && hull[0] == hull[1]) hull.resize(1);
    return hull;
}

BinaryMask rasterize_convex_polygon(const std::vector<Pixel>& hull, int width, int height) {
    BinaryMask out(width, height);
    if (hull.empty()) return out;

    int min_x = hull[0].x, max_x = hull[0].x, min_y = hull[0].y, max_y = hull[0].y;
    for (const auto& p : hull) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    min_y = std::max(min_y, 0);
    max_y = std::min(max_y, height - 1);

    // Each directed edge p->q admits points r with cross(p, q, r) >= 0, which for a fixed row
    // is a linear constraint a*x + b >= 0. For a 2-vertex hull the edge pair pins r to the segment.
    const std::size_t n = hull.size();
    for (int y = min_y; y <= max_y; ++y) {
        std::int64_t lo = std::max(min_x, 0);
        std::int64_t hi = std::min(max_x, width - 1);
        if (n >= 2) {
            for (std::size_t i = 0; i < n && lo <= hi; ++i) {
                Pixel p = hull[i];
                Pixel q = hull[(i + 1) % n];
                const std::int64_t dx = q.x - p.x;
                const std::int64_t dy = q.y - p.y;
                // cross = dx*(y - p.y) - dy*(x - p.x) = a*x + b
                const std::int64_t a = -dy;
                const std::int64_t b = dx * (y - p.y) + dy * p.x;
                if (a == 0) {
                    if (b < 0) hi = lo - 1;
                } else if (a > 0) {
                    lo = std::max(lo, ceil_div(-b, a));
                } else {
                    hi = std::min(hi, floor_div(-b, a));
                }
            }
        }
        for (std::int64_t x = lo; x <= hi; ++x) out.set(static_cast<int>(x), y);
    }
    return out;
}

BinaryMask convex_hull_mask(const BinaryMask& mask) {
    auto pts = mask.pixels();
    if (pts.empty()) throw Error(ErrorCode::EmptyMask, "convex hull of an empty mask");
    return rasterize_convex_polygon(convex_hull(std::move(pts)), mask.width(), mask.height());
}

std::optional<double> ray_exit_distance(const std::vector<Pixel>& hull, Point o, double dx, double dy) {
    if (hull.size() < 3) return std::nullopt;
    double best = -1.0;
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double ax = hull[i].x, ay = hull[i].y;
        const double bx = hull[(i + 1) % n].x, by = hull[(i + 1) % n].y;
        const double ex = bx - ax, ey = by - ay;
        const double den = dx * ey - dy * ex;
        if (den == 0.0) continue;
        const double wx = ax - o.x, wy = ay - o.y;
        const double t = (wx * ey - wy * ex) / den;
        const double u = (wx * dy - wy * dx) / den;
        if (t >= 0.0 && u >= -1e-12 && u <= 1.0 + 1e-12) best = std::max(best, t);
    }
    if (best < 0.0) return std::nullopt;
    return best;
}

}  // namespace fundusquant
