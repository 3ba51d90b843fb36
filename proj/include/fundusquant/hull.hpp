#pragma once

#include <optional>
#include <vector>

#include "fundusquant/raster.hpp"

namespace fundusquant {

/// Convex hull of pixel centres, counter-clockwise in (x, y) coordinates, no collinear vertices.
/// One vertex for a single point, two for collinear input.
std::vector<Pixel> convex_hull(std::vector<Pixel> points);

/// Pixels whose centres lie inside or on `hull` (exact integer arithmetic).
BinaryMask rasterize_convex_polygon(const std::vector<Pixel>& hull, int width, int height);

/// Filled convex hull of the foreground pixel centres. Throws EmptyMask.
BinaryMask convex_hull_mask(const BinaryMask& mask);

/// Largest t >= 0 at which origin + t * (dx, dy) crosses the boundary of a convex polygon,
/// i.e. where the ray leaves it. nullopt for degenerate polygons or a missed ray.
std::optional<double> ray_exit_distance(const std::vector<Pixel>& hull, Point origin, double dx, double dy);

}  // namespace fundusquant
