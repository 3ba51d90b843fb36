#include <fstream>

#include "doctest.h"
#include "fundusquant/png_io.hpp"
#include "fundusquant/taxonomy.hpp"
#include "support.hpp"

using namespace fundusquant;
using namespace fq_test;

TEST_CASE("mask round trip") {
    const auto dir = scratch_dir("png_mask");
    Rng rng(2);
    const BinaryMask m = random_mask(37, 23, rng);
    write_mask_png(dir / "m.png", m);
    CHECK(read_mask_png(dir / "m.png") == m);
    const DecodedPng d = decode_png(dir / "m.png");
    CHECK(d.channels == 1);
    CHECK(d.width == 37);
}

TEST_CASE("label map round trip keeps class ids and palette colours") {
    const auto dir = scratch_dir("png_label");
    LabelMap l(20, 10);
    for (int x = 0; x < 20; ++x) l(x, x % 10) = static_cast<std::uint8_t>(1 + x % 19);
    write_label_png(dir / "l.png", l, Registry::builtin());
    CHECK(read_label_png(dir / "l.png") == l);
    const DecodedPng d = decode_png(dir / "l.png");
    CHECK(d.palette);
    REQUIRE(d.palette_colors.size() > 9);
    const Rgba c = Registry::builtin().by_id(9).color;
    CHECK(d.palette_colors[9].r == c.r);
    CHECK(d.palette_colors[9].g == c.g);
}

TEST_CASE("prob map round trip at 16 bits") {
    const auto dir = scratch_dir("png_prob");
    ProbMap p(16, 16);
    Rng rng(3);
    for (double& v : p.data()) v = rng.uniform();
    write_prob_png(dir / "p.png", p);
    const ProbMap back = read_prob_png(dir / "p.png");
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(back.data()[i] - p.data()[i]) <= 0.5 / 65535.0 + 1e-12);
}

TEST_CASE("rgb round trip and luminance") {
    const auto dir = scratch_dir("png_rgb");
    RgbImage img(4, 3, 0);
    img.at(1, 1)[0] = 255;
    img.at(2, 2)[1] = 255;
    write_rgb_png(dir / "c.png", img);
    const RgbImage back = read_rgb_png(dir / "c.png");
    CHECK(back.rgb == img.rgb);
    const RealRaster g = read_gray_png(dir / "c.png");
    CHECK(g(1, 1) == doctest::Approx(0.299));
    CHECK(g(2, 2) == doctest::Approx(0.587));
    CHECK(read_mask_png(dir / "c.png").count() == 2);
}

TEST_CASE("corrupt and missing files raise DecodeError naming the path") {
    const auto dir = scratch_dir("png_bad");
    {
        std::ofstream out(dir / "bad.png", std::ios::binary);
        out << "\x89PNG\r\n\x1a\n garbage";
    }
    for (const auto& p : {dir / "bad.png", dir / "missing.png"}) {
        try {
            read_mask_png(p);
            FAIL("expected DecodeError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DecodeError);
            CHECK(std::string(e.what()).find(p.filename().string()) != std::string::npos);
        }
    }
}

TEST_CASE("writing to an unwritable path raises EncodeError") {
    try {
        write_mask_png("/nonexistent_dir/x.png", BinaryMask(2, 2));
        FAIL("expected EncodeError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EncodeError);
    }
}
