#include "fundusquant/components.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace fundusquant {

namespace {

constexpr std::array<Pixel, 4> kN4{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
constexpr std::array<Pixel, 8> kN8{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

// Clockwise (on screen) ring used by the contour tracer; even indices are axial moves.
constexpr std::array<Pixel, 8> kRing = kN8;

int ring_index(int dx, int dy) {
    for (int i = 0; i < 8; ++i) {
        if (kRing[i].x == dx && kRing[i].y == dy) return i;
    }
    return -1;
}

constexpr double kKulpa = 0.948;

}  // namespace

Grid<int> label_components(const BinaryMask& mask, Connectivity conn, int* count) {
    Grid<int> labels(mask.width(), mask.height(), 0);
    std::vector<Pixel> stack;
    int next = 0;
    const bool eight = conn == Connectivity::Eight;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask(x, y) || labels(x, y)) continue;
            ++next;
            labels(x, y) = next;
            stack.push_back({x, y});
            while (!stack.empty()) {
                Pixel p = stack.back();
                stack.pop_back();
                auto visit = [&](Pixel d) {
                    int nx = p.x + d.x, ny = p.y + d.y;
                    if (mask.test(nx, ny) && !labels(nx, ny)) {
                        labels(nx, ny) = next;
                        stack.push_back({nx, ny});
                    }
                };
                if (eight) {
                    for (auto d : kN8) visit(d);
                } else {
                    for (auto d : kN4) visit(d);
                }
            }
        }
    }
    if (count) *count = next;
    return labels;
}

std::size_t count_components(const BinaryMask& mask, Connectivity conn) {
    int n = 0;
    label_components(mask, conn, &n);
    return static_cast<std::size_t>(n);
}

ChainCounts trace_outer_contour(const BinaryMask& mask, Pixel start) {
    ChainCounts chain;
    Pixel cur = start;
    int back = 4;  // west of the first row-major pixel is background
    int first_move = -1;
    // Each pixel is entered at most 4 times by a Moore trace; the bound guards malformed starts.
    const std::size_t max_steps = 4 * mask.size() + 8;
    for (std::size_t step = 0; step < max_steps; ++step) {
        int found = -1;
        for (int i = 1; i <= 8; ++i) {
            int k = (back + i) % 8;
            if (mask.test(cur.x + kRing[k].x, cur.y + kRing[k].y)) {
                found = k;
                break;
            }
        }
        if (found < 0) break;  // isolated pixel
        if (cur == start && found == first_move) break;
        if (first_move < 0) first_move = found;

        int prev_k = (found + 7) % 8;
        Pixel prev{cur.x + kRing[prev_k].x, cur.y + kRing[prev_k].y};
        Pixel nxt{cur.x + kRing[found].x, cur.y + kRing[found].y};
        back = ring_index(prev.x - nxt.x, prev.y - nxt.y);
        if (found % 2 == 0) {
            ++chain.axial;
        } else {
            ++chain.diagonal;
        }
        cur = nxt;
    }
    return chain;
}

ComponentSet connected_components(const BinaryMask& mask, Connectivity conn) {
    int n = 0;
    Grid<int> labels = label_components(mask, conn, &n);
    ComponentSet comps(static_cast<std::size_t>(n));
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            int l = labels(x, y);
            if (l) comps[static_cast<std::size_t>(l - 1)].pixels.push_back({x, y});
        }
    }
    for (auto& c : comps) {
        c.area = c.pixels.size();
        double sx = 0.0, sy = 0.0;
        c.bbox = {c.pixels.front().x, c.pixels.front().y, c.pixels.front().x, c.pixels.front().y};
        for (const auto& p : c.pixels) {
            sx += p.x;
            sy += p.y;
            c.bbox.min_x = std::min(c.bbox.min_x, p.x);
            c.bbox.max_x = std::max(c.bbox.max_x, p.x);
            c.bbox.min_y = std::min(c.bbox.min_y, p.y);
            c.bbox.max_y = std::max(c.bbox.max_y, p.y);
            for (auto d : kN4) {
                int nx = p.x + d.x, ny = p.y + d.y;
                if (!mask.contains(nx, ny) || labels(nx, ny) != labels(p.x, p.y)) ++c.boundary_edges;
            }
        }
        c.centroid = {sx / static_cast<double>(c.area), sy / static_cast<double>(c.area)};

        // 4-connected components are traced on their own pixels so that diagonal
        // neighbours belonging to other components do not join the contour.
        if (conn == Connectivity::Four) {
            BinaryMask own(mask.width(), mask.height());
            for (const auto& p : c.pixels) own.set(p.x, p.y);
            auto chain = trace_outer_contour(own, c.pixels.front());
            c.perimeter = kKulpa * (static_cast<double>(chain.axial) + std::numbers::sqrt2 * static_cast<double>(chain.diagonal)) + std::numbers::pi;
        } else {
            auto chain = trace_outer_contour(mask, c.pixels.front());
            c.perimeter = kKulpa * (static_cast<double>(chain.axial) + std::numbers::sqrt2 * static_cast<double>(chain.diagonal)) + std::numbers::pi;
        }
    }
    return comps;
}

std::vector<Pixel> boundary_pixels(const BinaryMask& mask) {
    std::vector<Pixel> out;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask(x, y)) continue;
            for (auto d : kN4) {
                if (!mask.test(x + d.x, y + d.y)) {
                    out.push_back({x, y});
                    break;
                }
            }
        }
    }
    return out;
}

BinaryMask boundary_mask(const BinaryMask& mask) {
    BinaryMask out(mask.width(), mask.height());
    for (const auto& p : boundary_pixels(mask)) out.set(p.x, p.y);
    return out;
}

ShapeDescriptor moment_ellipse(const std::vector<Pixel>& pixels) {
    ShapeDescriptor d;
    if (pixels.empty()) return d;
    const double n = static_cast<double>(pixels.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : pixels) {
        mx += p.x;
        my += p.y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& p : pixels) {
        double dx = p.x - mx, dy = p.y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    // unit-square pixels contribute 1/12 variance along each axis
    const double a = sxx / n + 1.0 / 12.0;
    const double c = syy / n + 1.0 / 12.0;
    const double b = sxy / n;
    const double mid = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    const double l1 = mid + rad;
    const double l2 = std::max(mid - rad, 0.0);
    d.major_axis = 4.0 * std::sqrt(l1);
    d.minor_axis = std::max(4.0 * std::sqrt(l2), 1.0);
    d.aspect_ratio = d.major_axis / d.minor_axis;

    // y grows downward in the raster, so flip the sign of the mixed moment
    double theta = 0.5 * std::atan2(-2.0 * b, a - c) * 180.0 / std::numbers::pi;
    if (theta >= 90.0) theta -= 180.0;
    if (theta == 0.0) theta = 0.0;  // drop negative zero
    d.orientation_deg = theta;
    return d;
}

ShapeDescriptor describe_shape(const Component& c) {
    ShapeDescriptor d = moment_ellipse(c.pixels);
    const double area = static_cast<double>(c.area);
    if (c.perimeter > 0.0) {
        d.circularity = std::min(1.0, 4.0 * std::numbers::pi * area / (c.perimeter * c.perimeter));
    }
    return d;
}

}  // namespace fundusquant
