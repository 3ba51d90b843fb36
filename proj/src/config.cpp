#include "fundusquant/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "fundusquant/error.hpp"

namespace fundusquant {

using nlohmann::json;

std::string_view to_string(Laterality l) noexcept {
    switch (l) {
        case Laterality::OD: return "OD";
        case Laterality::OS: return "OS";
        case Laterality::Unknown: return "Unknown";
    }
    return "Unknown";
}

Laterality parse_laterality(std::string_view s) {
    if (s == "OD" || s == "od" || s == "R" || s == "right") return Laterality::OD;
    if (s == "OS" || s == "os" || s == "L" || s == "left") return Laterality::OS;
    if (s == "Unknown" || s == "unknown" || s.empty()) return Laterality::Unknown;
    throw Error(ErrorCode::ConfigError, "unknown laterality '" + std::string(s) + "'");
}

namespace {

template <typename E>
struct EnumNames {
    std::vector<std::pair<E, const char*>> names;

    const char* name(E e) const {
        for (const auto& [v, n] : names) {
            if (v == e) return n;
        }
        return "";
    }
    E parse(const json& j, const std::string& key) const {
        if (!j.is_string()) throw Error(ErrorCode::ConfigError, key + " must be a string");
        const auto s = j.get<std::string>();
        for (const auto& [v, n] : names) {
            if (s == n) return v;
        }
        throw Error(ErrorCode::ConfigError, key + ": unknown value '" + s + "'");
    }
};

const EnumNames<TortuosityMode> kTortuosity{{{TortuosityMode::ArcChord, "arc_chord"}, {TortuosityMode::Curvature, "curvature"}}};
const EnumNames<SizeBinMode> kSizeMode{{{SizeBinMode::DiscRelative, "disc_relative"}, {SizeBinMode::AbsolutePixels, "absolute_px"}}};
const EnumNames<QuadrantMode> kQuadrant{{{QuadrantMode::AxisAligned, "axis_aligned"}, {QuadrantMode::Diagonal, "diagonal"}}};
const EnumNames<DispersionWeighting> kWeighting{{{DispersionWeighting::Uniform, "uniform"}, {DispersionWeighting::Area, "area"}}};
const EnumNames<VerticalCdrMode> kCdr{{{VerticalCdrMode::AxisAligned, "axis_aligned"}, {VerticalCdrMode::Caliper, "caliper"}}};

double number(const json& j, const std::string& key) {
    if (!j.is_number()) throw Error(ErrorCode::ConfigError, key + " must be a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& key) {
    if (!j.is_number_integer()) throw Error(ErrorCode::ConfigError, key + " must be an integer");
    return j.get<int>();
}

template <std::size_t N>
std::array<double, N> numbers(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != N) {
        throw Error(ErrorCode::ConfigError, key + " must be an array of " + std::to_string(N) + " numbers");
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = number(j[i], key);
    return out;
}

using Setter = std::function<void(const json&)>;

void apply_section(const json& j, const std::string& section, const std::map<std::string, Setter>& setters) {
    if (!j.is_object()) throw Error(ErrorCode::ConfigError, section + " must be an object");
    for (const auto& [key, value] : j.items()) {
        auto it = setters.find(key);
        if (it == setters.end()) throw Error(ErrorCode::ConfigError, "unknown key " + section + "." + key);
        it->second(value);
    }
}

}  // namespace

json Config::to_json() const {
    json j;
    j["vessel"] = {
        {"annulus", {vessel.annulus_inner, vessel.annulus_outer}},
        {"knudtson", {{"artery", vessel.knudtson_artery}, {"vein", vessel.knudtson_vein}}},
        {"min_branch_len_px", vessel.min_branch_len_px},
        {"min_zone_samples", vessel.min_zone_samples},
        {"tortuosity_mode", kTortuosity.name(vessel.tortuosity_mode)},
    };
    j["optic"] = {
        {"ray_step_deg", optic.ray_step_deg},
        {"sector_boundaries_deg", optic.sector_boundaries_deg},
        {"cdr_mode", kCdr.name(optic.cdr_mode)},
    };
    j["lesion"] = {
        {"size_mode", kSizeMode.name(lesion.size_mode)},
        {"size_bins_frac_da", lesion.size_bins_frac_da},
        {"size_bins_px", lesion.size_bins_px},
        {"severity_bins", lesion.severity_bins},
        {"quadrant_mode", kQuadrant.name(lesion.quadrant_mode)},
    };
    j["phenotype"] = {{"dispersion_weighting", kWeighting.name(phenotype.dispersion_weighting)}};
    j["curation"] = {
        {"threshold", curation.threshold},
        {"min_largest_fraction", curation.min_largest_fraction},
        {"min_fragment_area", curation.min_fragment_area},
        {"max_fragments", curation.max_fragments},
        {"spur_length_px", curation.spur_length_px},
        {"max_spurs", curation.max_spurs},
    };
    j["laterality"] = {{"disc_right_of_fovea", std::string(to_string(laterality.disc_right_of_fovea))}};
    return j;
}

Config Config::from_json(const json& j) {
    Config c;
    if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
    std::map<std::string, Setter> sections;

    sections["vessel"] = [&](const json& s) {
        apply_section(s, "vessel",
                      {
                          {"annulus",
                           [&](const json& v) {
                               auto a = numbers<2>(v, "vessel.annulus");
                               c.vessel.annulus_inner = a[0];
                               c.vessel.annulus_outer = a[1];
                           }},
                          {"knudtson",
                           [&](const json& v) {
                               apply_section(v, "vessel.knudtson",
                                             {{"artery", [&](const json& x) { c.vessel.knudtson_artery = number(x, "vessel.knudtson.artery"); }},
                                              {"vein", [&](const json& x) { c.vessel.knudtson_vein = number(x, "vessel.knudtson.vein"); }}});
                           }},
                          {"min_branch_len_px", [&](const json& v) { c.vessel.min_branch_len_px = number(v, "vessel.min_branch_len_px"); }},
                          {"min_zone_samples", [&](const json& v) { c.vessel.min_zone_samples = integer(v, "vessel.min_zone_samples"); }},
                          {"tortuosity_mode", [&](const json& v) { c.vessel.tortuosity_mode = kTortuosity.parse(v, "vessel.tortuosity_mode"); }},
                      });
    };
    sections["optic"] = [&](const json& s) {
        apply_section(s, "optic",
                      {
                          {"ray_step_deg", [&](const json& v) { c.optic.ray_step_deg = number(v, "optic.ray_step_deg"); }},
                          {"sector_boundaries_deg", [&](const json& v) { c.optic.sector_boundaries_deg = numbers<4>(v, "optic.sector_boundaries_deg"); }},
                          {"cdr_mode", [&](const json& v) { c.optic.cdr_mode = kCdr.parse(v, "optic.cdr_mode"); }},
                      });
    };
    sections["lesion"] = [&](const json& s) {
        apply_section(s, "lesion",
                      {
                          {"size_mode", [&](const json& v) { c.lesion.size_mode = kSizeMode.parse(v, "lesion.size_mode"); }},
                          {"size_bins_frac_da", [&](const json& v) { c.lesion.size_bins_frac_da = numbers<2>(v, "lesion.size_bins_frac_da"); }},
                          {"size_bins_px", [&](const json& v) { c.lesion.size_bins_px = numbers<2>(v, "lesion.size_bins_px"); }},
                          {"severity_bins", [&](const json& v) { c.lesion.severity_bins = numbers<2>(v, "lesion.severity_bins"); }},
                          {"quadrant_mode", [&](const json& v) { c.lesion.quadrant_mode = kQuadrant.parse(v, "lesion.quadrant_mode"); }},
                      });
    };
    sections["phenotype"] = [&](const json& s) {
        apply_section(s, "phenotype",
                      {{"dispersion_weighting", [&](const json& v) {
                            c.phenotype.dispersion_weighting = kWeighting.parse(v, "phenotype.dispersion_weighting");
                        }}});
    };
    sections["curation"] = [&](const json& s) {
        apply_section(s, "curation",
                      {
                          {"threshold", [&](const json& v) { c.curation.threshold = number(v, "curation.threshold"); }},
                          {"min_largest_fraction", [&](const json& v) { c.curation.min_largest_fraction = number(v, "curation.min_largest_fraction"); }},
                          {"min_fragment_area", [&](const json& v) { c.curation.min_fragment_area = integer(v, "curation.min_fragment_area"); }},
                          {"max_fragments", [&](const json& v) { c.curation.max_fragments = integer(v, "curation.max_fragments"); }},
                          {"spur_length_px", [&](const json& v) { c.curation.spur_length_px = number(v, "curation.spur_length_px"); }},
                          {"max_spurs", [&](const json& v) { c.curation.max_spurs = integer(v, "curation.max_spurs"); }},
                      });
    };
    sections["laterality"] = [&](const json& s) {
        apply_section(s, "laterality",
                      {{"disc_right_of_fovea", [&](const json& v) {
                            if (!v.is_string()) throw Error(ErrorCode::ConfigError, "laterality.disc_right_of_fovea must be a string");
                            c.laterality.disc_right_of_fovea = parse_laterality(v.get<std::string>());
                        }}});
    };

    apply_section(j, "config", sections);
    c.validate();
    return c;
}

void Config::validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::ConfigError, m); };
    if (!(vessel.annulus_inner >= 0.0 && vessel.annulus_inner < vessel.annulus_outer)) fail("vessel.annulus must satisfy 0 <= inner < outer");
    if (!(vessel.knudtson_artery > 0.0 && vessel.knudtson_vein > 0.0)) fail("vessel.knudtson coefficients must be positive");
    if (vessel.min_zone_samples < 1) fail("vessel.min_zone_samples must be >= 1");
    if (!(vessel.min_branch_len_px >= 0.0)) fail("vessel.min_branch_len_px must be >= 0");
    if (!(optic.ray_step_deg > 0.0 && optic.ray_step_deg <= 90.0)) fail("optic.ray_step_deg must lie in (0, 90]");
    const auto& b = optic.sector_boundaries_deg;
    if (!(b[0] >= 0.0 && b[0] < b[1] && b[1] < b[2] && b[2] < b[3] && b[3] < b[0] + 360.0)) {
        fail("optic.sector_boundaries_deg must be increasing within one turn");
    }
    if (!(lesion.size_bins_frac_da[0] > 0.0 && lesion.size_bins_frac_da[0] < lesion.size_bins_frac_da[1])) fail("lesion.size_bins_frac_da must be increasing and positive");
    if (!(lesion.size_bins_px[0] > 0.0 && lesion.size_bins_px[0] < lesion.size_bins_px[1])) fail("lesion.size_bins_px must be increasing and positive");
    if (!(lesion.severity_bins[0] > 0.0 && lesion.severity_bins[0] < lesion.severity_bins[1])) fail("lesion.severity_bins must be increasing and positive");
    if (!(curation.threshold > 0.0 && curation.threshold < 1.0)) fail("curation.threshold must lie in (0, 1)");
    if (!(curation.min_largest_fraction >= 0.0 && curation.min_largest_fraction <= 1.0)) fail("curation.min_largest_fraction must lie in [0, 1]");
    if (curation.min_fragment_area < 1 || curation.max_fragments < 0 || curation.max_spurs < 0) fail("curation counts must be non-negative");
    if (laterality.disc_right_of_fovea == Laterality::Unknown) fail("laterality.disc_right_of_fovea must be OD or OS");
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
    }
    return from_json(j);
}

std::string Config::fingerprint() const {
    const std::string text = to_json().dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace fundusquant
