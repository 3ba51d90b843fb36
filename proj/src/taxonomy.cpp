#include "fundusquant/taxonomy.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fundusquant/error.hpp"
#include "registry_data.hpp"

namespace fundusquant {

std::string_view to_string(ClassGroup g) noexcept {
    switch (g) {
        case ClassGroup::AnatomicalStructure: return "AnatomicalStructure";
        case ClassGroup::Phenotype: return "Phenotype";
        case ClassGroup::Lesion: return "Lesion";
    }
    return "Lesion";
}

std::string normalize_class_name(std::string_view name) {
    std::string out;
    bool pending_space = false;
    for (char ch : name) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c) || ch == '_' || ch == '-') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

namespace {

ClassGroup parse_group(const std::string& s) {
    if (s == "AnatomicalStructure") return ClassGroup::AnatomicalStructure;
    if (s == "Phenotype") return ClassGroup::Phenotype;
    if (s == "Lesion") return ClassGroup::Lesion;
    throw Error(ErrorCode::RegistryError, "unknown class group '" + s + "'");
}

}  // namespace

Registry Registry::from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::RegistryError, e.what());
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer()) {
        throw Error(ErrorCode::RegistryError, "registry requires an integer 'version'");
    }

    Registry reg;
    reg.version_ = doc["version"].get<int>();
    reg.by_id_.fill(-1);

    try {
        for (const auto& entry : doc.at("classes")) {
            TargetClass c;
            int id = entry.at("id").get<int>();
            if (id <= 0 || id > 255) throw Error(ErrorCode::RegistryError, "class id out of range: " + std::to_string(id));
            c.id = static_cast<ClassId>(id);
            c.canonical_name = entry.at("name").get<std::string>();
            c.group = parse_group(entry.at("group").get<std::string>());
            c.aliases = entry.value("aliases", std::vector<std::string>{});
            c.topological = entry.value("topological", false);
            c.granularity = entry.value("granularity", std::string("coarse"));
            auto color = entry.at("color").get<std::vector<int>>();
            if (color.size() != 4) throw Error(ErrorCode::RegistryError, "color must be RGBA for " + c.canonical_name);
            c.color = {static_cast<std::uint8_t>(color[0]), static_cast<std::uint8_t>(color[1]),
                       static_cast<std::uint8_t>(color[2]), static_cast<std::uint8_t>(color[3])};
            reg.classes_.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::RegistryError, e.what());
    }

    // ids must be dense 1..N
    for (std::size_t i = 0; i < reg.classes_.size(); ++i) {
        const auto& c = reg.classes_[i];
        if (c.id != i + 1) {
            throw Error(ErrorCode::RegistryError, "class ids must be dense and ordered; got " + std::to_string(c.id) +
                                                      " at position " + std::to_string(i + 1));
        }
        reg.by_id_[c.id] = static_cast<int>(i);
        auto add = [&](const std::string& n) {
            auto key = normalize_class_name(n);
            auto [it, inserted] = reg.by_name_.emplace(key, i);
            if (!inserted && it->second != i) {
                throw Error(ErrorCode::RegistryError, "name '" + n + "' maps to two classes");
            }
        };
        add(c.canonical_name);
        for (const auto& a : c.aliases) add(a);
    }
    return reg;
}

Registry Registry::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::RegistryError, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

const Registry& Registry::builtin() {
    static const Registry reg = from_json(detail::kBuiltinRegistry);
    return reg;
}

const TargetClass& Registry::parse_class(std::string_view name) const {
    auto it = by_name_.find(normalize_class_name(name));
    if (it == by_name_.end()) throw Error(ErrorCode::UnknownClass, std::string(name));
    return classes_[it->second];
}

const TargetClass& Registry::by_id(ClassId id) const {
    if (by_id_[id] < 0) throw Error(ErrorCode::UnknownClass, "id " + std::to_string(id));
    return classes_[static_cast<std::size_t>(by_id_[id])];
}

bool Registry::has_id(ClassId id) const noexcept { return by_id_[id] >= 0; }

}  // namespace fundusquant
