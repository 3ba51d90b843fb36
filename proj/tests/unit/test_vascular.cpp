#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fundusquant/distance.hpp"
#include "fundusquant/skeleton.hpp"
#include "fundusquant/vascular.hpp"
#include "support.hpp"

using namespace fundusquant;
using namespace fq_test;

namespace {

double tortuosity_of(const BinaryMask& m) {
    return tortuosity(skeleton_graph(skeletonize(m), distance_transform(m)));
}

BinaryMask full_frame(int w, int h) { return ~BinaryMask(w, h); }

}  // namespace

TEST_CASE("straight segments have unit tortuosity at any angle") {
    for (int a = 0; a <= 90; a += 5) {
        const double t = a * std::numbers::pi / 180.0;
        const Pixel end{5 + static_cast<int>(std::lround(180 * std::cos(t))),
                        190 - static_cast<int>(std::lround(180 * std::sin(t)))};
        CHECK(tortuosity_of(polyline_mask(200, 200, {{5, 190}, end})) == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("semicircle tortuosity is pi over two") {
    for (int r : {30, 50, 80}) CHECK(std::abs(tortuosity_of(semicircle(r)) - std::numbers::pi / 2) < 0.05);
}

TEST_CASE("tortuosity is invariant under quarter turns and mirroring") {
    // A sinuous curve that never doubles back, so thinning has no orientation-dependent choice.
    std::vector<Pixel> pts;
    for (int x = 5; x <= 155; x += 3) pts.push_back({x, static_cast<int>(std::lround(60 + 35 * std::sin(x / 18.0)))});
    const BinaryMask m = polyline_mask(160, 120, pts);
    const double t0 = tortuosity_of(m);
    CHECK(t0 > 1.2);
    BinaryMask r = m;
    for (int k = 0; k < 3; ++k) {
        r = r.rotated_90();
        CHECK(tortuosity_of(r) == doctest::Approx(t0).epsilon(1e-6));
        CHECK(tortuosity_of(r.mirrored_horizontally()) == doctest::Approx(t0).epsilon(1e-6));
    }
}

TEST_CASE("branch tortuosities are at least one and bracket the weighted mean") {
    const BinaryMask m = clean_tree(200);
    const SkeletonGraph g = skeleton_graph(skeletonize(m), distance_transform(m));
    const auto per = branch_tortuosities(g, nullptr, 10.0);
    REQUIRE_FALSE(per.empty());
    for (double v : per) CHECK(v >= 1.0);
    const double t = tortuosity(g);
    CHECK(t >= *std::min_element(per.begin(), per.end()) - 1e-12);
    CHECK(t <= *std::max_element(per.begin(), per.end()) + 1e-12);
}

TEST_CASE("tortuosity without long branches throws") {
    const BinaryMask m = polyline_mask(20, 20, {{2, 2}, {6, 2}});
    CHECK_THROWS_AS(tortuosity_of(m), Error);
}

TEST_CASE("curvature mode is zero for a straight line") {
    const BinaryMask m = polyline_mask(100, 20, {{5, 10}, {90, 10}});
    VesselConfig cfg;
    cfg.tortuosity_mode = TortuosityMode::Curvature;
    const SkeletonGraph g = skeleton_graph(m, distance_transform(m));
    CHECK(tortuosity(g, nullptr, cfg) == doctest::Approx(0.0));
    const BinaryMask c = semicircle(40);
    CHECK(tortuosity(skeleton_graph(skeletonize(c), distance_transform(c)), nullptr, cfg) > 0.0);
}

TEST_CASE("box counting dimension") {
    BinaryMask line(512, 512);
    paint_rect(line, 0, 200, 511, 200);
    const double fd_line = box_counting_fd(line);
    CHECK(fd_line >= 0.95);
    CHECK(fd_line <= 1.10);

    BinaryMask sq(512, 512);
    paint_rect(sq, 0, 0, 511, 511);
    const double fd_sq = box_counting_fd(sq);
    CHECK(fd_sq >= 1.90);
    CHECK(fd_sq <= 2.00);

    CHECK_THROWS_AS(box_counting_fd(BinaryMask(512, 512)), Error);
    CHECK_THROWS_AS(box_counting_fd(BinaryMask(12, 12)), Error);
}

TEST_CASE("box counting is invariant to translation by the largest box") {
    Rng rng(4);
    BinaryMask m(512, 512), shifted(512, 512);
    for (int i = 0; i < 40; ++i) {
        const Pixel a{rng.integer(0, 380), rng.integer(0, 380)};
        const Pixel b{rng.integer(0, 380), rng.integer(0, 380)};
        m = m | polyline_mask(512, 512, {a, b});
        shifted = shifted | polyline_mask(512, 512, {{a.x + 128, a.y}, {b.x + 128, b.y}});
    }
    CHECK(box_counting_fd(shifted) == doctest::Approx(box_counting_fd(m)));
    CHECK(std::abs(box_counting_fd(m.rotated_90()) - box_counting_fd(m)) <= 0.02);
}

TEST_CASE("knudtson pairing matches the direct formula") {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        std::array<double, 6> w{};
        for (double& v : w) v = rng.uniform(3.0, 20.0);
        CHECK(knudtson_equivalent(w, 0.88) == doctest::Approx(knudtson_six_oracle(w, 0.88)).epsilon(1e-12));
    }
}

TEST_CASE("knudtson keeps the six largest and pads with the median") {
    const std::vector<double> many{1, 2, 10, 11, 12, 13, 14, 15};
    std::size_t used = 0;
    const double v = knudtson_equivalent(many, 0.95, &used);
    CHECK(used == 6);
    CHECK(v == doctest::Approx(knudtson_six_oracle({10, 11, 12, 13, 14, 15}, 0.95)));

    const std::vector<double> few{4, 8, 9};
    CHECK(knudtson_equivalent(few, 0.88) == doctest::Approx(knudtson_six_oracle({4, 8, 9, 8, 8, 8}, 0.88)));
    CHECK_THROWS_AS(knudtson_equivalent(std::vector<double>{}, 0.88), Error);
}

TEST_CASE("knudtson is homogeneous and AVR is scale invariant") {
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> a(6), v(6);
        for (double& x : a) x = rng.uniform(3.0, 15.0);
        for (double& x : v) x = rng.uniform(5.0, 25.0);
        const double c = rng.uniform(0.2, 5.0);
        std::vector<double> ca = a, cv = v;
        for (double& x : ca) x *= c;
        for (double& x : cv) x *= c;
        CHECK(knudtson_equivalent(ca, 0.88) == doctest::Approx(c * knudtson_equivalent(a, 0.88)).epsilon(1e-12));
        CHECK(caliber_summary(ca, cv).avr == doctest::Approx(caliber_summary(a, v).avr).epsilon(1e-12));
    }
    const std::vector<double> some{5.0};
    CHECK_THROWS_AS(caliber_summary(some, std::vector<double>{}), Error);
}

TEST_CASE("median") {
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 2, 3}) == 2.5);
}

TEST_CASE("annulus membership") {
    const MeasurementZone z = measurement_annulus({50, 50}, 10.0, full_frame(101, 101));
    CHECK(z.annulus.test(65, 50));
    CHECK(z.annulus.test(50, 70));
    CHECK_FALSE(z.annulus.test(64, 50));
    CHECK_FALSE(z.annulus.test(71, 50));
    CHECK_THROWS_AS(measurement_annulus({50, 50}, 0.0, full_frame(101, 101)), Error);
}

TEST_CASE("width samples equal twice the distance transform") {
    BinaryMask v(200, 200);
    for (int k = 0; k < 4; ++k) {
        const double a = k * std::numbers::pi / 2 + 0.3;
        const Point end{100 + 90 * std::cos(a), 100 - 90 * std::sin(a)};
        const double len = 90.0;
        for (double t = 15; t <= len; t += 0.5) {
            const Point c{100 + (end.x - 100) * t / len, 100 + (end.y - 100) * t / len};
            paint_disk(v, c, 2.0 + k);
        }
    }
    const MeasurementZone z = measurement_annulus({100, 100}, 20.0, full_frame(200, 200));
    const auto groups = sample_widths(v, z);
    CHECK(groups.size() == 4);
    const RealRaster edt = distance_transform(v);
    for (const auto& g : groups) {
        CHECK(g.samples.size() >= 5);
        for (const auto& s : g.samples) {
            CHECK(s.width == 2.0 * edt(s.pixel.x, s.pixel.y));
            CHECK(z.annulus.test(s.pixel.x, s.pixel.y));
        }
    }
    CHECK_THROWS_AS(sample_widths(BinaryMask(200, 200), z), Error);
}
