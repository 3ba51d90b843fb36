#include <cmath>

#include "doctest.h"
#include "fundusquant/fundus_context.hpp"
#include "fundusquant/image_ops.hpp"
#include "support.hpp"

using namespace fundusquant;
using namespace fq_test;

namespace {

RealRaster photo_with_dip(int n, Point fov_c, double fov_r, Point dip) {
    RealRaster g(n, n, 0.0);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (std::hypot(x - fov_c.x, y - fov_c.y) > fov_r) continue;
            const double d = std::hypot(x - dip.x, y - dip.y);
            g(x, y) = 0.6 - 0.3 * std::exp(-d * d / 200.0);
        }
    }
    return g;
}

}  // namespace

TEST_CASE("otsu separates two levels") {
    RealRaster g(10, 10, 0.1);
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 10; ++y) g(x, y) = 0.8;
    const double t = otsu_threshold(g);
    CHECK(t > 0.1);
    CHECK(t < 0.8);
    CHECK(otsu_threshold(RealRaster(4, 4, 0.5)) == 0.0);
}

TEST_CASE("fov estimate recovers a bright disk") {
    const RealRaster g = photo_with_dip(128, {63.5, 63.5}, 50, {40, 63});
    const BinaryMask fov = estimate_fov(g);
    const BinaryMask truth = disk(128, 128, {63.5, 63.5}, 50);
    const double inter = static_cast<double>((fov & truth).count());
    CHECK(inter / static_cast<double>((fov | truth).count()) > 0.97);
    CHECK_THROWS_AS(estimate_fov(RealRaster(20, 20, 0.0)), Error);
}

TEST_CASE("masked gaussian ignores unsupported pixels") {
    RealRaster v(9, 9, 1.0);
    BinaryMask sup(9, 9);
    paint_rect(sup, 0, 0, 8, 8);
    v(4, 4) = 100.0;
    sup.set(4, 4, false);
    const RealRaster out = masked_gaussian(v, sup, 1.5, 0, 0, 8, 8);
    CHECK(out(4, 4) == doctest::Approx(1.0));
    CHECK(out(0, 0) == doctest::Approx(1.0));
    const RealRaster none = masked_gaussian(v, BinaryMask(9, 9), 1.0, 0, 0, 8, 8);
    CHECK(std::isinf(none(3, 3)));
}

TEST_CASE("laterality from disc and fovea") {
    CHECK(determine_laterality({80, 50}, Point{30, 50}, 100) == Laterality::OD);
    CHECK(determine_laterality({20, 50}, Point{70, 50}, 100) == Laterality::OS);
    CHECK(determine_laterality({20, 50}, Point{70, 50}, 100, Laterality::OS) == Laterality::OD);
    CHECK(determine_laterality({80, 50}, std::nullopt, 100) == Laterality::OD);
    CHECK(determine_laterality({50, 50}, Point{50, 10}, 100) == Laterality::Unknown);
}

TEST_CASE("disc geometry radius from area") {
    const BinaryMask d = disk(100, 100, {50, 50}, 15);
    const DiscGeometry g = disc_geometry(d);
    CHECK(g.center.x == doctest::Approx(50.0));
    CHECK(g.radius == doctest::Approx(std::sqrt(static_cast<double>(g.hull.count()) / M_PI)));
    CHECK_THROWS_AS(disc_geometry(BinaryMask(5, 5)), Error);
}

TEST_CASE("fovea localised at the darkest smoothed point") {
    const int n = 256;
    const Point disc_c{170, 128};
    const RealRaster g = photo_with_dip(n, {127.5, 127.5}, 120, {110, 130});
    const BinaryMask dm = disk(n, n, disc_c, 12);
    const FundusContext ctx = build_context(dm, &g, {});
    REQUIRE(ctx.fovea);
    CHECK(std::abs(ctx.fovea->x - 110) <= 2);
    CHECK(std::abs(ctx.fovea->y - 130) <= 2);
    CHECK(ctx.fovea_source == Source::Estimated);
    CHECK(ctx.laterality == Laterality::OD);
    CHECK(ctx.nasal_is_image_right());
}

TEST_CASE("overrides win over estimates") {
    const int n = 128;
    const RealRaster g = photo_with_dip(n, {63.5, 63.5}, 60, {40, 63});
    ContextOverrides o;
    o.fovea = Point{100, 60};
    o.laterality = Laterality::OS;
    const FundusContext ctx = build_context(disk(n, n, {80, 64}, 6), &g, o);
    CHECK(ctx.fovea->x == 100);
    CHECK(ctx.fovea_source == Source::Provided);
    CHECK(ctx.laterality == Laterality::OS);
    CHECK(ctx.laterality_source == Source::Provided);
    CHECK_FALSE(ctx.nasal_is_image_right());
}

TEST_CASE("without a photo the fov is the full frame") {
    const FundusContext ctx = build_context(disk(50, 40, {30, 20}, 5), nullptr, {});
    CHECK(ctx.fov_area() == 2000);
    CHECK_FALSE(ctx.fovea);
}
