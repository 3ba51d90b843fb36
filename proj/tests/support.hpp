#pragma once

// Fixtures and brute-force oracles shared by the unit and acceptance suites. Oracles here are
// deliberately naive and share no code with the library beyond the raster types.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fundusquant/raster.hpp"

namespace fq_test {

using fundusquant::BinaryMask;
using fundusquant::Pixel;
using fundusquant::Point;

class Rng {
public:
    explicit Rng(std::uint32_t seed) : gen_(seed) {}
    double uniform() { return static_cast<double>(gen_()) / 4294967296.0; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

private:
    std::mt19937 gen_;
};

inline void paint_disk(BinaryMask& m, Point c, double r) {
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if ((x - c.x) * (x - c.x) + (y - c.y) * (y - c.y) <= r * r) m.set(x, y);
        }
    }
}

inline BinaryMask disk(int w, int h, Point c, double r) {
    BinaryMask m(w, h);
    paint_disk(m, c, r);
    return m;
}

inline void paint_rect(BinaryMask& m, int x0, int y0, int x1, int y1) {
    for (int y = std::max(0, y0); y <= std::min(m.height() - 1, y1); ++y) {
        for (int x = std::max(0, x0); x <= std::min(m.width() - 1, x1); ++x) m.set(x, y);
    }
}

/// Independent pixels with the given density.
inline BinaryMask noise_mask(int w, int h, double density, Rng& rng) {
    BinaryMask m(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) m.set(x, y, rng.uniform() < density);
    }
    return m;
}

/// A few random disks and rectangles; sometimes empty.
inline BinaryMask blob_mask(int w, int h, Rng& rng) {
    BinaryMask m(w, h);
    const int n = rng.integer(0, 4);
    for (int i = 0; i < n; ++i) {
        if (rng.uniform() < 0.5) {
            paint_disk(m, {rng.uniform(0, w - 1), rng.uniform(0, h - 1)}, rng.uniform(1.0, w / 4.0));
        } else {
            const int x0 = rng.integer(0, w - 1), y0 = rng.integer(0, h - 1);
            paint_rect(m, x0, y0, x0 + rng.integer(0, w / 3), y0 + rng.integer(0, h / 3));
        }
    }
    return m;
}

/// Mixture used by the metric oracles: blobs, noise, or a blob with noise.
inline BinaryMask random_mask(int w, int h, Rng& rng) {
    const double kind = rng.uniform();
    if (kind < 0.4) return blob_mask(w, h, rng);
    if (kind < 0.7) return noise_mask(w, h, rng.uniform(0.0, 0.6), rng);
    BinaryMask a = blob_mask(w, h, rng);
    BinaryMask b = noise_mask(w, h, 0.05, rng);
    return a | b;
}

// ---- oracles ----

struct PairCounts {
    std::size_t inter = 0, pred = 0, gt = 0, uni = 0;
};

inline PairCounts count_oracle(const BinaryMask& p, const BinaryMask& g) {
    PairCounts c;
    for (int y = 0; y < p.height(); ++y) {
        for (int x = 0; x < p.width(); ++x) {
            const bool a = p(x, y), b = g(x, y);
            if (a) ++c.pred;
            if (b) ++c.gt;
            if (a && b) ++c.inter;
            if (a || b) ++c.uni;
        }
    }
    return c;
}

/// Foreground pixels with a background (or out-of-frame) 4-neighbour.
inline std::vector<Pixel> boundary_oracle(const BinaryMask& m) {
    std::vector<Pixel> out;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y)) continue;
            const bool edge = !m.test(x - 1, y) || !m.test(x + 1, y) || !m.test(x, y - 1) || !m.test(x, y + 1);
            if (edge) out.push_back({x, y});
        }
    }
    return out;
}

/// Exhaustive pairwise-distance HD95 (pooled directed sets, linear interpolation).
inline double hd95_oracle(const BinaryMask& p, const BinaryMask& g) {
    const auto bp = boundary_oracle(p), bg = boundary_oracle(g);
    std::vector<double> d;
    auto directed = [&](const std::vector<Pixel>& from, const std::vector<Pixel>& to) {
        for (const auto& a : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& b : to) best = std::min(best, std::hypot(a.x - b.x, a.y - b.y));
            d.push_back(best);
        }
    };
    directed(bp, bg);
    directed(bg, bp);
    std::sort(d.begin(), d.end());
    const double rank = 0.95 * static_cast<double>(d.size() - 1);
    const auto lo = static_cast<std::size_t>(rank);
    const std::size_t hi = std::min(lo + 1, d.size() - 1);
    return d[lo] + (rank - static_cast<double>(lo)) * (d[hi] - d[lo]);
}

inline double max_hausdorff_oracle(const BinaryMask& p, const BinaryMask& g) {
    const auto bp = boundary_oracle(p), bg = boundary_oracle(g);
    double worst = 0.0;
    auto directed = [&](const std::vector<Pixel>& from, const std::vector<Pixel>& to) {
        for (const auto& a : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& b : to) best = std::min(best, std::hypot(a.x - b.x, a.y - b.y));
            worst = std::max(worst, best);
        }
    };
    directed(bp, bg);
    directed(bg, bp);
    return worst;
}

/// Distance to the nearest background pixel, the ring outside the frame counting as background.
inline double edt_oracle(const BinaryMask& m, int x, int y) {
    if (!m(x, y)) return 0.0;
    double best = std::min({x + 1, y + 1, m.width() - x, m.height() - y});
    for (int v = 0; v < m.height(); ++v) {
        for (int u = 0; u < m.width(); ++u) {
            if (!m(u, v)) best = std::min(best, std::hypot(u - x, v - y));
        }
    }
    return best;
}

/// Breadth-first flood fill component count.
inline std::size_t component_count_oracle(const BinaryMask& m, bool eight) {
    BinaryMask seen(m.width(), m.height());
    std::size_t n = 0;
    std::vector<Pixel> queue;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m(x, y) || seen(x, y)) continue;
            ++n;
            queue.assign(1, {x, y});
            seen.set(x, y);
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const Pixel p = queue[head];
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) continue;
                        const int qx = p.x + dx, qy = p.y + dy;
                        if (m.test(qx, qy) && !seen(qx, qy)) {
                            seen.set(qx, qy);
                            queue.push_back({qx, qy});
                        }
                    }
                }
            }
        }
    }
    return n;
}

/// Knudtson pairing written out for exactly six widths.
inline double knudtson_six_oracle(std::array<double, 6> w, double k) {
    std::sort(w.begin(), w.end(), std::greater<>());
    auto pair = [k](double a, double b) { return k * std::sqrt(a * a + b * b); };
    std::array<double, 3> r1{pair(w[0], w[5]), pair(w[1], w[4]), pair(w[2], w[3])};
    std::sort(r1.begin(), r1.end(), std::greater<>());
    std::array<double, 2> r2{pair(r1[0], r1[2]), r1[1]};
    return pair(r2[0], r2[1]);
}

// ---- shape fixtures ----

/// Horizontal spine of thickness 3 with `teeth` one-pixel teeth of `tooth_len` pixels hanging
/// below it every `pitch` pixels.
inline BinaryMask comb(int teeth = 40, int tooth_len = 5, int pitch = 4) {
    const int w = 20 + teeth * pitch + 20, h = 40;
    BinaryMask m(w, h);
    paint_rect(m, 10, 10, w - 11, 12);
    for (int i = 0; i < teeth; ++i) {
        const int x = 20 + i * pitch;
        paint_rect(m, x, 13, x, 12 + tooth_len);
    }
    return m;
}

/// A thick Y-shaped tree with a side branch: one component, long branches only.
inline BinaryMask clean_tree(int size = 200) {
    BinaryMask m(size, size);
    auto stroke = [&](Point a, Point b, double r) {
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        for (double t = 0.0; t <= len; t += 0.5) {
            const Point c{a.x + (b.x - a.x) * t / len, a.y + (b.y - a.y) * t / len};
            for (int y = static_cast<int>(c.y - r - 1); y <= static_cast<int>(c.y + r + 1); ++y) {
                for (int x = static_cast<int>(c.x - r - 1); x <= static_cast<int>(c.x + r + 1); ++x) {
                    if (m.contains(x, y) && (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y) <= r * r) m.set(x, y);
                }
            }
        }
    };
    const double s = size;
    stroke({0.5 * s, 0.95 * s}, {0.5 * s, 0.5 * s}, 2.5);
    stroke({0.5 * s, 0.5 * s}, {0.2 * s, 0.1 * s}, 2.0);
    stroke({0.5 * s, 0.5 * s}, {0.8 * s, 0.1 * s}, 2.0);
    stroke({0.65 * s, 0.3 * s}, {0.9 * s, 0.35 * s}, 1.5);
    return m;
}

/// One-pixel 8-connected polyline through the given points (Bresenham).
inline BinaryMask polyline_mask(int w, int h, const std::vector<Pixel>& pts) {
    BinaryMask m(w, h);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Pixel a = pts[i];
        const Pixel b = pts[i + 1];
        const int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
        const int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
        int err = dx + dy;
        for (;;) {
            m.set(a.x, a.y);
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
    return m;
}

/// Upper half of a circle of radius r, drawn as a one-pixel 8-connected curve.
inline BinaryMask semicircle(int r) {
    const int size = 2 * r + 11;
    std::vector<Pixel> pts;
    const double cx = r + 5, cy = r + 5;
    for (int i = 0; i <= 720; ++i) {
        const double t = std::numbers::pi * i / 720.0;
        pts.push_back({static_cast<int>(std::lround(cx + r * std::cos(t))), static_cast<int>(std::lround(cy - r * std::sin(t)))});
    }
    return polyline_mask(size, size, pts);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("fundusquant_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fq_test
