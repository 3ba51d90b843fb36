#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fundusquant/raster.hpp"
#include "fundusquant/taxonomy.hpp"

namespace fundusquant {

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

    RgbImage() = default;
    RgbImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), rgb(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, fill) {}
    std::uint8_t* at(int x, int y) { return &rgb[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const std::uint8_t* at(int x, int y) const { return &rgb[(static_cast<std::size_t>(y) * width + x) * 3]; }
};

/// Decoded samples before interpretation. Palette images keep their indices.
struct DecodedPng {
    int width = 0;
    int height = 0;
    int channels = 0;    // 1 gray / palette, 2 gray+alpha, 3 RGB, 4 RGBA
    int bit_depth = 8;   // 8 or 16 after unpacking
    bool palette = false;
    std::vector<std::uint16_t> samples;
    std::vector<Rgba> palette_colors;
};

/// All readers throw DecodeError naming the path.
DecodedPng decode_png(const std::filesystem::path& path);

/// Foreground where any colour channel is non-zero (alpha ignored).
BinaryMask read_mask_png(const std::filesystem::path& path);
/// Palette indices, or 8-bit gray values, taken as class ids.
LabelMap read_label_png(const std::filesystem::path& path);
/// 16-bit gray / 65535, or 8-bit gray / 255.
ProbMap read_prob_png(const std::filesystem::path& path);
/// Rec. 601 luminance in [0, 1] from gray or RGB input.
RealRaster read_gray_png(const std::filesystem::path& path);
RgbImage read_rgb_png(const std::filesystem::path& path);

/// Writers throw EncodeError.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);
/// Indexed PNG whose palette holds the registry colours at each class id.
void write_label_png(const std::filesystem::path& path, const LabelMap& labels, const Registry& registry);
void write_prob_png(const std::filesystem::path& path, const ProbMap& prob);
void write_rgb_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace fundusquant
