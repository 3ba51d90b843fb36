#pragma once

#include <cstddef>
#include <vector>

#include "fundusquant/raster.hpp"

namespace fundusquant {

enum class Connectivity { Four = 4, Eight = 8 };

struct BoundingBox {
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    int width() const noexcept { return max_x - min_x + 1; }
    int height() const noexcept { return max_y - min_y + 1; }
    bool operator==(const BoundingBox&) const = default;
};

struct Component {
    std::vector<Pixel> pixels;  // row-major order
    std::size_t area = 0;
    Point centroid;
    BoundingBox bbox;
    /// Pixel edges separating the component from background (frame counts as background).
    std::size_t boundary_edges = 0;
    /// Outer-contour length: 0.948 * (axial + sqrt(2) * diagonal chain steps) through
    /// pixel centres, plus pi for the half-pixel offset to the pixel outline.
    double perimeter = 0.0;
};

/// Components ordered by their first pixel in row-major order.
using ComponentSet = std::vector<Component>;

ComponentSet connected_components(const BinaryMask& mask, Connectivity conn = Connectivity::Eight);

/// Label image (0 = background, components numbered from 1 in row-major discovery order).
Grid<int> label_components(const BinaryMask& mask, Connectivity conn, int* count = nullptr);

std::size_t count_components(const BinaryMask& mask, Connectivity conn);

/// Foreground pixels with at least one background 4-neighbour; the frame counts as background.
std::vector<Pixel> boundary_pixels(const BinaryMask& mask);
BinaryMask boundary_mask(const BinaryMask& mask);

struct ChainCounts {
    std::size_t axial = 0;
    std::size_t diagonal = 0;
};

/// Moore-neighbour trace of the outer contour of the 8-connected component containing `start`,
/// which must be that component's first pixel in row-major order.
ChainCounts trace_outer_contour(const BinaryMask& mask, Pixel start);

struct ShapeDescriptor {
    double circularity = 0.0;   // 4*pi*A / P^2, capped at 1
    double aspect_ratio = 1.0;  // major / minor moment-ellipse axis
    double major_axis = 0.0;
    double minor_axis = 0.0;
    /// Principal-axis angle in degrees, [-90, 90), counter-clockwise from the +x axis with y pointing up.
    double orientation_deg = 0.0;
};

/// Moment-based shape statistics treating every pixel as a unit square.
ShapeDescriptor describe_shape(const Component& c);

/// Orientation and axes of the moment ellipse of an arbitrary pixel list.
ShapeDescriptor moment_ellipse(const std::vector<Pixel>& pixels);

}  // namespace fundusquant
