#pragma once

#include <cstdint>
#include <filesystem>
#include <map>

#include "fundusquant/config.hpp"
#include "fundusquant/manifest.hpp"
#include "fundusquant/raster.hpp"
#include "fundusquant/taxonomy.hpp"

namespace fundusquant {

struct PhantomOptions {
    int size = 512;
    Laterality eye = Laterality::OD;
    std::uint32_t seed = 1;
    bool lesions = true;
    bool phenotypes = true;
};

/// Synthetic fundus: circular FOV, disc and cup, artery and vein trees radiating from the disc,
/// optional lesions, tessellation and atrophy, and a matching photo with a dark fovea.
/// Built for the right eye and mirrored for the left.
struct Phantom {
    int size = 0;
    Laterality eye = Laterality::OD;
    BinaryMask fov;
    std::map<ClassId, BinaryMask> masks;  // non-empty classes only
    RealRaster photo;
    Point disc_center;
    double disc_radius = 0.0;
    double cup_radius = 0.0;
    Point fovea;
};

Phantom make_phantom(const PhantomOptions& opt = {});

/// Mirrors every raster and point left-right and flips the eye.
Phantom mirrored(const Phantom& p);

/// Writes one mask PNG per class plus a photo PNG into `dir` and returns the manifest entry
/// (paths relative to `dir`). With `with_overrides` the fovea and eye are recorded as given.
ImageManifestEntry write_phantom(const Phantom& p, const std::filesystem::path& dir, const std::string& image_id,
                                 bool with_overrides = false);

}  // namespace fundusquant
