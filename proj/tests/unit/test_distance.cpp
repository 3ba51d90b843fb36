#include "doctest.h"
#include "fundusquant/distance.hpp"
#include "support.hpp"

using namespace fundusquant;
using namespace fq_test;

TEST_CASE("distance transform equals the brute-force oracle") {
    Rng rng(21);
    for (int i = 0; i < 25; ++i) {
        const BinaryMask m = random_mask(20, 17, rng);
        const RealRaster d = distance_transform(m);
        for (int y = 0; y < m.height(); ++y) {
            for (int x = 0; x < m.width(); ++x) CHECK(d(x, y) == doctest::Approx(edt_oracle(m, x, y)).epsilon(1e-12));
        }
    }
}

TEST_CASE("the frame counts as background") {
    BinaryMask full(5, 5);
    paint_rect(full, 0, 0, 4, 4);
    const RealRaster d = distance_transform(full);
    CHECK(d(0, 0) == 1.0);
    CHECK(d(2, 2) == 3.0);
}

TEST_CASE("squared distances to sites") {
    BinaryMask sites(6, 1);
    sites.set(0, 0);
    const auto d2 = squared_distance_to_sites(sites, false);
    CHECK(d2(5, 0) == 25);
    CHECK(d2(0, 0) == 0);
    const auto none = squared_distance_to_sites(BinaryMask(3, 3), false);
    CHECK(none(1, 1) == std::numeric_limits<std::int64_t>::max());
}
