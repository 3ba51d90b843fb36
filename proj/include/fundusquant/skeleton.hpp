#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fundusquant/raster.hpp"

namespace fundusquant {

/// Two-subiteration thinning (Zhang-Suen deletion masks) where each marked pixel is re-checked
/// for simplicity before removal, followed by a pass that breaks residual 2x2 blocks.
/// Output is a subset of the input, free of 2x2 foreground blocks where topology allows,
/// and keeps the 8-connected component count.
BinaryMask skeletonize(const BinaryMask& mask);

/// True when no 2x2 block is entirely foreground.
bool is_thin(const BinaryMask& mask);

enum class NodeKind { Endpoint, Junction };

struct SkeletonNode {
    NodeKind kind = NodeKind::Endpoint;
    std::vector<Pixel> pixels;  // one pixel for endpoints, the 8-connected cluster for junctions
    Point position;             // cluster centroid
};

struct SkeletonBranch {
    /// Skeleton pixels owned by this branch (never junction pixels), in trace order.
    std::vector<Pixel> pixels;
    /// Ordered path including the junction pixels the branch attaches to, if any.
    std::vector<Pixel> polyline;
    std::optional<std::size_t> start_node;
    std::optional<std::size_t> end_node;
    /// Sum of chords between every fifth polyline vertex, averaged over both directions.
    /// Raw 8-connected step counts overstate oblique and curved lengths by up to ~8%.
    double arc_length = 0.0;
    /// Distance-transform value at each owned pixel, aligned with `pixels`.
    std::vector<double> radii;
    bool closed_loop = false;

    double chord_length() const;
    bool ends_at_endpoint(const std::vector<SkeletonNode>& nodes) const;
};

struct SkeletonGraph {
    std::vector<SkeletonNode> nodes;
    std::vector<SkeletonBranch> branches;

    std::size_t junction_count() const;
    std::size_t endpoint_count() const;
};

/// Decomposes a thin skeleton into maximal junction-free branches. Throws NotThin.
SkeletonGraph skeleton_graph(const BinaryMask& skeleton, const RealRaster& edt);

}  // namespace fundusquant
