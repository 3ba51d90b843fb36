#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fundusquant {

enum class ClassGroup { AnatomicalStructure, Phenotype, Lesion };

std::string_view to_string(ClassGroup g) noexcept;

using ClassId = std::uint8_t;

/// Stable ids of the coarse targets. Registry files must agree with these.
namespace class_id {
inline constexpr ClassId Artery = 1;
inline constexpr ClassId Vein = 2;
inline constexpr ClassId OpticDisc = 3;
inline constexpr ClassId OpticCup = 4;
inline constexpr ClassId Tessellation = 5;
inline constexpr ClassId PeripapillaryAtrophy = 6;
inline constexpr ClassId DiffuseAtrophy = 7;
inline constexpr ClassId PatchyAtrophy = 8;
inline constexpr ClassId FirstLesion = 9;
inline constexpr ClassId OtherPossibleLesions = 19;
}  // namespace class_id

struct Rgba {
    std::uint8_t r = 0, g = 0, b = 0, a = 255;
    bool operator==(const Rgba&) const = default;
};

struct TargetClass {
    ClassId id = 0;
    std::string canonical_name;
    ClassGroup group = ClassGroup::Lesion;
    std::vector<std::string> aliases;
    Rgba color;
    /// Curation applies topology filtering only to these classes.
    bool topological = false;
    /// "coarse" for the segmentation task table, "fine" for the detailed lesion list.
    std::string granularity = "coarse";

    bool operator==(const TargetClass& o) const noexcept { return id == o.id; }
};

inline ClassGroup group_of(const TargetClass& c) noexcept { return c.group; }

/// Lower-cases, maps '_' and '-' to spaces, collapses whitespace runs and trims.
std::string normalize_class_name(std::string_view name);

/// Immutable after construction.
class Registry {
public:
    static const Registry& builtin();
    static Registry from_json(std::string_view text);
    static Registry load(const std::filesystem::path& path);

    int version() const noexcept { return version_; }
    std::span<const TargetClass> classes() const noexcept { return classes_; }

    /// Case-insensitive lookup over canonical names and aliases; throws UnknownClass.
    const TargetClass& parse_class(std::string_view name) const;
    const TargetClass& by_id(ClassId id) const;
    bool has_id(ClassId id) const noexcept;

private:
    Registry() = default;

    int version_ = 0;
    std::vector<TargetClass> classes_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::array<int, 256> by_id_{};
};

}  // namespace fundusquant
