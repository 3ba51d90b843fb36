#include "fundusquant/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace fundusquant {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& why) { throw Error(ErrorCode::ManifestError, why); }

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot read manifest " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string require_string(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string()) fail(where + ": missing string field '" + key + "'");
    return j[key].get<std::string>();
}

void check_entry(const ImageManifestEntry& e) {
    if (e.image_id.empty()) fail("image entry without image_id");
    if (e.image_id.find_first_of(",\"\r\n/\\") != std::string::npos || e.image_id == "." || e.image_id == "..") {
        fail("image_id '" + e.image_id + "' must be usable as a file name and CSV cell");
    }
    if (e.masks.empty() && !e.label_map && e.prob_maps.empty()) fail(e.image_id + ": no mask source");
    if (e.um_per_px && !(*e.um_per_px > 0.0)) fail(e.image_id + ": um_per_px must be positive");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(std::move(cur));
    return cells;
}

double parse_number(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(where + ": not a number: " + s);
    }
}

}  // namespace

Manifest parse_manifest_json(const json& j, const fs::path& base) {
    if (!j.is_object()) fail("manifest must be a JSON object");
    if (j.contains("schema") && j["schema"] != kManifestSchema) fail("unsupported manifest schema");
    if (!j.contains("images") || !j["images"].is_array()) fail("manifest needs an 'images' array");
    Manifest m;
    for (const auto& item : j["images"]) {
        if (!item.is_object()) fail("image entry must be an object");
        ImageManifestEntry e;
        e.image_id = require_string(item, "image_id", "image entry");
        const std::string where = "image " + e.image_id;
        static const std::set<std::string> known{"image_id", "photo", "label_map", "masks", "prob_maps",
                                                 "fovea_xy", "laterality", "um_per_px"};
        for (const auto& [k, v] : item.items()) {
            if (!known.contains(k)) fail(where + ": unknown key '" + k + "'");
        }
        try {
            if (item.contains("photo")) e.photo = resolve(base, item["photo"].get<std::string>());
            if (item.contains("label_map")) e.label_map = resolve(base, item["label_map"].get<std::string>());
            if (item.contains("masks")) {
                for (const auto& [k, v] : item["masks"].items()) e.masks[k] = resolve(base, v.get<std::string>());
            }
            if (item.contains("prob_maps")) {
                for (const auto& [k, v] : item["prob_maps"].items()) e.prob_maps[k] = resolve(base, v.get<std::string>());
            }
            if (item.contains("fovea_xy")) {
                const auto& f = item["fovea_xy"];
                if (!f.is_array() || f.size() != 2) fail(where + ": fovea_xy must be [x, y]");
                e.fovea = Point{f[0].get<double>(), f[1].get<double>()};
            }
            if (item.contains("laterality")) e.laterality = parse_laterality(item["laterality"].get<std::string>());
            if (item.contains("um_per_px")) e.um_per_px = item["um_per_px"].get<double>();
        } catch (const json::exception& ex) {
            fail(where + ": " + ex.what());
        } catch (const Error& ex) {
            if (ex.code() == ErrorCode::ManifestError) throw;
            fail(where + ": " + ex.what());
        }
        check_entry(e);
        m.images.push_back(std::move(e));
    }
    return m;
}

Manifest parse_manifest_csv(const std::string& text, const fs::path& base) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) return {};
    const auto header = split_csv_line(line);
    Manifest m;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) fail("CSV manifest row has " + std::to_string(cells.size()) + " cells, expected " + std::to_string(header.size()));
        ImageManifestEntry e;
        std::optional<double> fx, fy;
        for (std::size_t i = 0; i < header.size(); ++i) {
            const std::string& col = header[i];
            const std::string& v = cells[i];
            if (col == "image_id") {
                e.image_id = v;
                continue;
            }
            if (v.empty()) continue;
            const std::string where = "image " + e.image_id;
            if (col == "photo") {
                e.photo = resolve(base, v);
            } else if (col == "label_map") {
                e.label_map = resolve(base, v);
            } else if (col == "fovea_x") {
                fx = parse_number(v, where);
            } else if (col == "fovea_y") {
                fy = parse_number(v, where);
            } else if (col == "laterality") {
                try {
                    e.laterality = parse_laterality(v);
                } catch (const Error& ex) {
                    fail(where + ": " + ex.what());
                }
            } else if (col == "um_per_px") {
                e.um_per_px = parse_number(v, where);
            } else if (col.rfind("mask:", 0) == 0) {
                e.masks[col.substr(5)] = resolve(base, v);
            } else if (col.rfind("prob:", 0) == 0) {
                e.prob_maps[col.substr(5)] = resolve(base, v);
            } else {
                fail("unknown CSV manifest column: " + col);
            }
        }
        if (fx.has_value() != fy.has_value()) fail("image " + e.image_id + ": fovea_x and fovea_y must be given together");
        if (fx) e.fovea = Point{*fx, *fy};
        check_entry(e);
        m.images.push_back(std::move(e));
    }
    return m;
}

Manifest load_manifest(const fs::path& path) {
    const std::string text = read_text(path);
    const fs::path base = path.parent_path();
    if (path.extension() == ".csv") return parse_manifest_csv(text, base);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        fail(path.string() + ": " + ex.what());
    }
    return parse_manifest_json(j, base);
}

json to_json(const Manifest& m) {
    json images = json::array();
    for (const auto& e : m.images) {
        json item = {{"image_id", e.image_id}};
        if (e.photo) item["photo"] = e.photo->generic_string();
        if (e.label_map) item["label_map"] = e.label_map->generic_string();
        if (!e.masks.empty()) {
            json masks = json::object();
            for (const auto& [k, v] : e.masks) masks[k] = v.generic_string();
            item["masks"] = masks;
        }
        if (!e.prob_maps.empty()) {
            json probs = json::object();
            for (const auto& [k, v] : e.prob_maps) probs[k] = v.generic_string();
            item["prob_maps"] = probs;
        }
        if (e.fovea) item["fovea_xy"] = {e.fovea->x, e.fovea->y};
        if (e.laterality) item["laterality"] = std::string(to_string(*e.laterality));
        if (e.um_per_px) item["um_per_px"] = *e.um_per_px;
        images.push_back(std::move(item));
    }
    return {{"schema", kManifestSchema}, {"images", images}};
}

std::vector<MetricPair> load_pairs(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::exception& ex) {
        fail(path.string() + ": " + ex.what());
    }
    if (!j.is_object() || !j.contains("pairs") || !j["pairs"].is_array()) fail("pairs manifest needs a 'pairs' array");
    const fs::path base = path.parent_path();
    std::vector<MetricPair> out;
    for (const auto& item : j["pairs"]) {
        if (!item.is_object()) fail("pair entry must be an object");
        MetricPair p;
        p.dataset = item.contains("dataset") ? item["dataset"].get<std::string>() : "";
        p.image_id = require_string(item, "image_id", "pair");
        p.class_name = require_string(item, "class", "pair " + p.image_id);
        p.pred = resolve(base, require_string(item, "pred", "pair " + p.image_id));
        p.gt = resolve(base, require_string(item, "gt", "pair " + p.image_id));
        if (item.contains("um_per_px")) {
            if (!item["um_per_px"].is_number()) fail("pair " + p.image_id + ": um_per_px must be a number");
            p.um_per_px = item["um_per_px"].get<double>();
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace fundusquant
