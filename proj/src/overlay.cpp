#include "fundusquant/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fundusquant/hull.hpp"

namespace fundusquant {

namespace {

void plot(RgbImage& img, int x, int y, const std::uint8_t* c) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
    std::uint8_t* p = img.at(x, y);
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
}

void line(RgbImage& img, Pixel a, Pixel b, const std::uint8_t* c) {
    const int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
    const int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        plot(img, a.x, a.y, c);
        if (a == b) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            a.x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            a.y += sy;
        }
    }
}

void polygon(RgbImage& img, const std::vector<Pixel>& poly, const std::uint8_t* c) {
    for (std::size_t i = 0; i < poly.size(); ++i) line(img, poly[i], poly[(i + 1) % poly.size()], c);
}

void circle(RgbImage& img, Point center, double r, const std::uint8_t* c) {
    const int steps = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r)));
    Pixel prev{};
    for (int i = 0; i <= steps; ++i) {
        const double t = 2.0 * std::numbers::pi * i / steps;
        const Pixel p{static_cast<int>(std::lround(center.x + r * std::cos(t))), static_cast<int>(std::lround(center.y + r * std::sin(t)))};
        if (i > 0) line(img, prev, p, c);
        prev = p;
    }
}

std::optional<double> number_at(const BiomarkerReport& r, std::string_view path) {
    const Metric* m = r.find(path);
    return m ? m->number() : std::nullopt;
}

}  // namespace

RgbImage render_overlay(const QuantifyInputs& in, const BiomarkerReport& report, const Config& cfg, const Registry& reg) {
    if (in.masks.empty()) throw Error(ErrorCode::DecodeError, in.image_id + ": nothing to render");
    const int w = in.masks.begin()->second.width(), h = in.masks.begin()->second.height();
    RgbImage img(w, h);
    if (in.photo) {
        if (in.photo->width() != w || in.photo->height() != h) throw Error(ErrorCode::ShapeMismatch, "photo and masks differ in size");
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const auto v = static_cast<std::uint8_t>(std::lround(std::clamp((*in.photo)(x, y), 0.0, 1.0) * 255.0));
                std::uint8_t* p = img.at(x, y);
                p[0] = p[1] = p[2] = v;
            }
        }
    }

    std::vector<const TargetClass*> present;
    for (const auto& [id, mask] : in.masks) {
        if (mask.empty() || !reg.has_id(id)) continue;
        const TargetClass& c = reg.by_id(id);
        present.push_back(&c);
        const double a = c.color.a / 255.0;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!mask(x, y)) continue;
                std::uint8_t* p = img.at(x, y);
                const std::uint8_t col[3]{c.color.r, c.color.g, c.color.b};
                for (int k = 0; k < 3; ++k) p[k] = static_cast<std::uint8_t>(std::lround(a * col[k] + (1.0 - a) * p[k]));
            }
        }
    }

    auto outline = [&](ClassId id, const std::uint8_t* col) {
        auto it = in.masks.find(id);
        if (it == in.masks.end() || it->second.empty()) return;
        polygon(img, convex_hull(it->second.pixels()), col);
    };
    outline(class_id::OpticDisc, OverlayColors::disc);
    outline(class_id::OpticCup, OverlayColors::cup);

    const auto cx = number_at(report, "context.disc_center_x"), cy = number_at(report, "context.disc_center_y");
    const auto r = number_at(report, "context.disc_radius");
    if (cx && cy && r) {
        circle(img, {*cx, *cy}, cfg.vessel.annulus_inner * *r, OverlayColors::annulus);
        circle(img, {*cx, *cy}, cfg.vessel.annulus_outer * *r, OverlayColors::annulus);
    }

    const auto fx = number_at(report, "context.fovea_x"), fy = number_at(report, "context.fovea_y");
    if (fx && fy) {
        const Pixel f{static_cast<int>(std::lround(*fx)), static_cast<int>(std::lround(*fy))};
        const int span = w + h;
        if (cfg.lesion.quadrant_mode == QuadrantMode::AxisAligned) {
            line(img, {0, f.y}, {w - 1, f.y}, OverlayColors::quadrants);
            line(img, {f.x, 0}, {f.x, h - 1}, OverlayColors::quadrants);
        } else {
            line(img, {f.x - span, f.y - span}, {f.x + span, f.y + span}, OverlayColors::quadrants);
            line(img, {f.x - span, f.y + span}, {f.x + span, f.y - span}, OverlayColors::quadrants);
        }
    }

    // legend: one opaque swatch per present class, top-left, black border
    const int sw = std::max(6, std::min(w, h) / 48);
    const std::uint8_t black[3]{0, 0, 0};
    int y0 = 2;
    for (const TargetClass* c : present) {
        if (y0 + sw + 2 > h) break;
        const std::uint8_t col[3]{c->color.r, c->color.g, c->color.b};
        for (int y = y0; y < y0 + sw + 2 && y < h; ++y) {
            for (int x = 2; x < 4 + sw && x < w; ++x) {
                const bool border = y == y0 || y == y0 + sw + 1 || x == 2 || x == 3 + sw;
                plot(img, x, y, border ? black : col);
            }
        }
        y0 += sw + 3;
    }
    return img;
}

}  // namespace fundusquant
