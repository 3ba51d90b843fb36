#include "doctest.h"
#include "fundusquant/overlay.hpp"
#include "fundusquant/phantom.hpp"
#include "fundusquant/report.hpp"

using namespace fundusquant;

namespace {

bool has_colour(const RgbImage& img, Rgba c) {
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const auto* p = img.at(x, y);
            if (p[0] == c.r && p[1] == c.g && p[2] == c.b) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("legend swatches appear exactly for present classes") {
    const Phantom p = make_phantom({.size = 256});
    QuantifyInputs in;
    in.image_id = "ov";
    in.masks = p.masks;
    in.photo = p.photo;
    const BiomarkerReport r = quantify_masks(in);
    const RgbImage img = render_overlay(in, r);
    CHECK(img.width == 256);
    for (const auto& c : Registry::builtin().classes()) {
        CAPTURE(c.canonical_name);
        CHECK(has_colour(img, c.color) == (p.masks.count(c.id) > 0));
    }
}

TEST_CASE("without a photo the canvas is black") {
    const Phantom p = make_phantom({.size = 128, .lesions = false, .phenotypes = false});
    QuantifyInputs in;
    in.image_id = "dark";
    in.masks.emplace(class_id::Artery, p.masks.at(class_id::Artery));
    const RgbImage img = render_overlay(in, quantify_masks(in));
    const auto* corner = img.at(127, 127);
    CHECK(corner[0] == 0);
    CHECK(corner[1] == 0);
    CHECK(corner[2] == 0);
}
