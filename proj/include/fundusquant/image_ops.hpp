#pragma once

#include "fundusquant/raster.hpp"

namespace fundusquant {

/// Otsu threshold over a 256-bin histogram of values in [0, 1]; returns the upper edge of the
/// last background bin, or 0 when the histogram has a single occupied bin.
double otsu_threshold(const RealRaster& gray);

/// Largest bright region (threshold max(otsu, 0.05)), convex-hull filled. Throws NoFOV when
/// the thresholded foreground covers less than 10% of the frame.
BinaryMask estimate_fov(const RealRaster& gray);

/// Gaussian smoothing restricted to `support`: out = G*(v.m) / G*(m), with clamp-to-edge
/// borders. Pixels with no support weight get +infinity. Only the window
/// [x0, x1] x [y0, y1] is computed; other pixels are +infinity.
RealRaster masked_gaussian(const RealRaster& values, const BinaryMask& support, double sigma, int x0, int y0, int x1,
                           int y1);

}  // namespace fundusquant
