#pragma once

#include <cstdint>

#include "fundusquant/raster.hpp"

namespace fundusquant {

/// Exact squared Euclidean distance from every pixel to the nearest "site" pixel,
/// via the two-pass separable lower-envelope algorithm on integer squared distances.
/// When `frame_is_site` is set, the ring of pixels just outside the frame also counts as sites.
/// Pixels with no reachable site get INT64_MAX.
Grid<std::int64_t> squared_distance_to_sites(const BinaryMask& sites, bool frame_is_site);

/// Distance from each foreground pixel to the nearest background pixel, with the frame
/// counting as background; zero on background.
RealRaster distance_transform(const BinaryMask& mask);

}  // namespace fundusquant
