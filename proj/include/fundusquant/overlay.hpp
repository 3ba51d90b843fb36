#pragma once

#include "fundusquant/config.hpp"
#include "fundusquant/png_io.hpp"
#include "fundusquant/report.hpp"

namespace fundusquant {

struct OverlayColors {
    static constexpr std::uint8_t disc[3]{255, 255, 255};
    static constexpr std::uint8_t cup[3]{255, 255, 0};
    static constexpr std::uint8_t annulus[3]{0, 255, 255};
    static constexpr std::uint8_t quadrants[3]{255, 0, 255};
};

/// Photo (or a black canvas) with translucent class fills from the registry palette, disc and cup
/// hull outlines, the vessel measurement annulus, quadrant lines through the fovea and a legend of
/// opaque swatches for the classes present. Geometry comes from the report's context block.
RgbImage render_overlay(const QuantifyInputs& in, const BiomarkerReport& report, const Config& cfg = {},
                        const Registry& reg = Registry::builtin());

}  // namespace fundusquant
