#pragma once

#include <optional>
#include <vector>

#include "fundusquant/config.hpp"
#include "fundusquant/raster.hpp"

namespace fundusquant {

struct DiscCupGeometry {
    BinaryMask disc_hull;
    BinaryMask cup_hull;  // clipped to the disc hull; empty when no cup
    std::vector<Pixel> disc_polygon;
    std::vector<Pixel> cup_polygon;  // hull of the clipped cup
    std::size_t disc_area = 0;
    std::size_t cup_area = 0;
    Point disc_center;
    double disc_h_diameter = 0.0, disc_v_diameter = 0.0;
    double cup_h_diameter = 0.0, cup_v_diameter = 0.0;
    double orientation_disc = 0.0;
    std::optional<double> orientation_cup;
    /// Set when the cup hull extended past the disc hull and was clipped.
    bool cup_clipped = false;

    bool has_cup() const noexcept { return cup_area > 0; }
};

/// Throws NoDisc.
DiscCupGeometry disc_cup_geometry(const BinaryMask& disc, const BinaryMask& cup, VerticalCdrMode mode = VerticalCdrMode::AxisAligned);

struct CupDiscRatios {
    double h_cdr = 0.0;
    double v_cdr = 0.0;
    double area_cdr = 0.0;
};

/// Throws NoCup.
CupDiscRatios cdr(const DiscCupGeometry& geom);

struct RimProfile {
    double inferior = 0.0;
    double superior = 0.0;
    double image_left = 0.0;
    double image_right = 0.0;
    /// Filled only when laterality is known.
    std::optional<double> nasal;
    std::optional<double> temporal;
    std::optional<bool> isnt_satisfied;  // I >= S >= N >= T
    std::size_t ray_misses = 0;
    std::size_t rays_used = 0;
    double mean_all_rays = 0.0;
};

/// Rays from the disc centroid at `ray_step_deg` spacing, offset by half a step so that no ray
/// lies on a sector boundary. Rays leaving `fov` before the disc boundary are skipped and
/// counted. Throws NoCup.
RimProfile isnt(const DiscCupGeometry& geom, Laterality laterality, const OpticConfig& cfg = {},
                const BinaryMask* fov = nullptr, Laterality disc_right_convention = Laterality::OD);

}  // namespace fundusquant
