#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fundusquant/config.hpp"
#include "fundusquant/raster.hpp"

#include "json.hpp"

namespace fundusquant {

struct ImageManifestEntry {
    std::string image_id;
    std::optional<std::filesystem::path> photo;
    /// Class name (any registry alias) to mask path.
    std::map<std::string, std::filesystem::path> masks;
    std::optional<std::filesystem::path> label_map;
    std::map<std::string, std::filesystem::path> prob_maps;
    std::optional<Point> fovea;
    std::optional<Laterality> laterality;
    std::optional<double> um_per_px;
};

struct Manifest {
    std::vector<ImageManifestEntry> images;
};

inline constexpr const char* kManifestSchema = "fundusquant.manifest/1";

/// JSON by default, CSV for a .csv extension. Relative paths resolve against the manifest's
/// directory. Throws ManifestError.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
/// Header row: image_id, photo, label_map, fovea_x, fovea_y, laterality, um_per_px, then one
/// `mask:<class>` or `prob:<class>` column per input. Empty cells mean absent.
Manifest parse_manifest_csv(const std::string& text, const std::filesystem::path& base_dir);

/// Paths are written as given.
nlohmann::json to_json(const Manifest& m);

struct MetricPair {
    std::string dataset;
    std::string image_id;
    std::string class_name;
    std::filesystem::path pred;
    std::filesystem::path gt;
    std::optional<double> um_per_px;
};

/// {"pairs": [{dataset, image_id, class, pred, gt, um_per_px?}]}. Throws ManifestError.
std::vector<MetricPair> load_pairs(const std::filesystem::path& path);

}  // namespace fundusquant
