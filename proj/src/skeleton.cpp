#include "fundusquant/skeleton.hpp"

#include <array>
#include <cmath>
#include <cstdint>

#include "fundusquant/components.hpp"

namespace fundusquant {

namespace {

// Padded working copy so neighbourhood reads never leave the buffer.
class Canvas {
public:
    explicit Canvas(const BinaryMask& m) : w_(m.width() + 2), h_(m.height() + 2), px_(static_cast<std::size_t>(w_) * h_, 0) {
        for (int y = 0; y < m.height(); ++y) {
            for (int x = 0; x < m.width(); ++x) px_[idx(x + 1, y + 1)] = m(x, y);
        }
    }

    std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * w_ + x; }
    std::uint8_t& at(int x, int y) { return px_[idx(x, y)]; }
    std::uint8_t at(int x, int y) const { return px_[idx(x, y)]; }
    int w() const { return w_; }
    int h() const { return h_; }

    // Neighbours counter-clockwise from east: E, NE, N, NW, W, SW, S, SE.
    std::array<int, 8> ring(int x, int y) const {
        return {at(x + 1, y), at(x + 1, y - 1), at(x, y - 1), at(x - 1, y - 1),
                at(x - 1, y), at(x - 1, y + 1), at(x, y + 1), at(x + 1, y + 1)};
    }

    BinaryMask to_mask() const {
        BinaryMask m(w_ - 2, h_ - 2);
        for (int y = 1; y < h_ - 1; ++y) {
            for (int x = 1; x < w_ - 1; ++x) m(x - 1, y - 1) = at(x, y);
        }
        return m;
    }

private:
    int w_, h_;
    std::vector<std::uint8_t> px_;
};

int neighbour_count(const std::array<int, 8>& n) {
    int b = 0;
    for (int v : n) b += v;
    return b;
}

// Yokoi 8-connectivity number; a pixel is simple iff it equals 1.
int yokoi8(const std::array<int, 8>& n) {
    int c = 0;
    for (int k = 0; k < 8; k += 2) {
        int a = 1 - n[k];
        int b = 1 - n[(k + 1) % 8];
        int d = 1 - n[(k + 2) % 8];
        c += a - a * b * d;
    }
    return c;
}

bool deletable(const std::array<int, 8>& n) {
    return neighbour_count(n) >= 2 && yokoi8(n) == 1;
}

bool zs_marks(const std::array<int, 8>& n, int sub) {
    const int b = neighbour_count(n);
    if (b < 2 || b > 6 || yokoi8(n) != 1) return false;
    const int e = n[0], no = n[2], w = n[4], s = n[6];
    if (sub == 0) return (no * e * s) == 0 && (e * s * w) == 0;
    return (no * e * w) == 0 && (no * s * w) == 0;
}

bool thinning_pass(Canvas& c, int sub, std::vector<Pixel>& marked) {
    marked.clear();
    for (int y = 1; y < c.h() - 1; ++y) {
        for (int x = 1; x < c.w() - 1; ++x) {
            if (c.at(x, y) && zs_marks(c.ring(x, y), sub)) marked.push_back({x, y});
        }
    }
    bool changed = false;
    for (const auto& p : marked) {
        if (deletable(c.ring(p.x, p.y))) {
            c.at(p.x, p.y) = 0;
            changed = true;
        }
    }
    return changed;
}

bool break_blocks(Canvas& c) {
    bool changed = false;
    for (int y = 1; y < c.h() - 2; ++y) {
        for (int x = 1; x < c.w() - 2; ++x) {
            if (!(c.at(x, y) && c.at(x + 1, y) && c.at(x, y + 1) && c.at(x + 1, y + 1))) continue;
            const std::array<Pixel, 4> block{{{x, y}, {x + 1, y}, {x, y + 1}, {x + 1, y + 1}}};
            for (const auto& p : block) {
                if (deletable(c.ring(p.x, p.y))) {
                    c.at(p.x, p.y) = 0;
                    changed = true;
                    break;
                }
            }
        }
    }
    return changed;
}

// Staircase corners: exactly two neighbours, both 4-adjacent and hence diagonal to each other.
// Removing one keeps the curve connected and no two candidates can touch, so the pass is
// order-free and commutes with quarter turns and mirroring.
void prune_corners(Canvas& c) {
    std::vector<Pixel> corners;
    for (int y = 1; y < c.h() - 1; ++y) {
        for (int x = 1; x < c.w() - 1; ++x) {
            if (!c.at(x, y)) continue;
            const auto n = c.ring(x, y);
            if (neighbour_count(n) != 2) continue;
            for (int k = 0; k < 8; k += 2) {
                if (n[k] && n[(k + 2) % 8]) corners.push_back({x, y});
            }
        }
    }
    for (const auto& p : corners) c.at(p.x, p.y) = 0;
}

}  // namespace

BinaryMask skeletonize(const BinaryMask& mask) {
    Canvas c(mask);
    std::vector<Pixel> marked;
    for (;;) {
        bool changed = true;
        while (changed) {
            changed = thinning_pass(c, 0, marked);
            changed = thinning_pass(c, 1, marked) || changed;
        }
        if (!break_blocks(c)) break;
    }
    prune_corners(c);
    return c.to_mask();
}

bool is_thin(const BinaryMask& m) {
    for (int y = 0; y + 1 < m.height(); ++y) {
        for (int x = 0; x + 1 < m.width(); ++x) {
            if (m(x, y) && m(x + 1, y) && m(x, y + 1) && m(x + 1, y + 1)) return false;
        }
    }
    return true;
}

double SkeletonBranch::chord_length() const {
    if (polyline.size() < 2 || closed_loop) return 0.0;
    const double dx = polyline.back().x - polyline.front().x;
    const double dy = polyline.back().y - polyline.front().y;
    return std::hypot(dx, dy);
}

bool SkeletonBranch::ends_at_endpoint(const std::vector<SkeletonNode>& nodes) const {
    auto is_end = [&](const std::optional<std::size_t>& n) { return n && nodes[*n].kind == NodeKind::Endpoint; };
    return is_end(start_node) || is_end(end_node);
}

std::size_t SkeletonGraph::junction_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes) n += node.kind == NodeKind::Junction ? 1 : 0;
    return n;
}

std::size_t SkeletonGraph::endpoint_count() const { return nodes.size() - junction_count(); }

namespace {

constexpr std::array<Pixel, 8> kN8{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

// Chord sum over every fifth polyline vertex, averaged over both traversal directions so the
// result does not depend on which end the trace started from.
double resampled_length(const std::vector<Pixel>& pl) {
    constexpr std::size_t stride = 5;
    if (pl.size() < 2) return 0.0;
    auto one_way = [&](auto at) {
        double len = 0.0;
        std::size_t prev = 0;
        while (prev + 1 < pl.size()) {
            const std::size_t j = std::min(prev + stride, pl.size() - 1);
            len += std::hypot(at(j).x - at(prev).x, at(j).y - at(prev).y);
            prev = j;
        }
        return len;
    };
    const double fwd = one_way([&](std::size_t i) { return pl[i]; });
    const double rev = one_way([&](std::size_t i) { return pl[pl.size() - 1 - i]; });
    return 0.5 * (fwd + rev);
}

}  // namespace

SkeletonGraph skeleton_graph(const BinaryMask& s, const RealRaster& edt) {
    if (!is_thin(s)) throw Error(ErrorCode::NotThin, "skeleton contains a 2x2 foreground block");
    if (!s.same_shape(edt)) throw Error(ErrorCode::ShapeMismatch, "skeleton and distance map differ in size");

    const int w = s.width(), h = s.height();
    Grid<int> degree(w, h, 0);
    BinaryMask junction(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!s(x, y)) continue;
            int d = 0;
            for (auto o : kN8) d += s.test(x + o.x, y + o.y) ? 1 : 0;
            degree(x, y) = d;
            if (d >= 3) junction.set(x, y);
        }
    }

    SkeletonGraph g;
    Grid<int> node_of(w, h, -1);

    for (const auto& comp : connected_components(junction, Connectivity::Eight)) {
        SkeletonNode n;
        n.kind = NodeKind::Junction;
        n.pixels = comp.pixels;
        n.position = comp.centroid;
        for (const auto& p : comp.pixels) node_of(p.x, p.y) = static_cast<int>(g.nodes.size());
        g.nodes.push_back(std::move(n));
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (s(x, y) && degree(x, y) <= 1) {
                node_of(x, y) = static_cast<int>(g.nodes.size());
                g.nodes.push_back({NodeKind::Endpoint, {{x, y}}, {static_cast<double>(x), static_cast<double>(y)}});
            }
        }
    }

    BinaryMask visited(w, h);
    auto finish = [&](SkeletonBranch& b) {
        b.arc_length = resampled_length(b.polyline);
        for (const auto& p : b.pixels) b.radii.push_back(edt(p.x, p.y));
        g.branches.push_back(std::move(b));
    };

    auto trace = [&](std::optional<Pixel> attach, Pixel first) {
        SkeletonBranch b;
        if (attach) {
            b.polyline.push_back(*attach);
            b.start_node = static_cast<std::size_t>(node_of(attach->x, attach->y));
        } else if (node_of(first.x, first.y) >= 0) {
            b.start_node = static_cast<std::size_t>(node_of(first.x, first.y));
        }
        std::optional<Pixel> prev = attach;
        Pixel cur = first;
        visited.set(cur.x, cur.y);
        b.pixels.push_back(cur);
        b.polyline.push_back(cur);
        for (;;) {
            std::optional<Pixel> next_free, next_junction, back_to_start;
            for (auto o : kN8) {
                Pixel q{cur.x + o.x, cur.y + o.y};
                if (!s.test(q.x, q.y) || (prev && q == *prev)) continue;
                if (junction(q.x, q.y)) {
                    if (!next_junction) next_junction = q;
                } else if (!visited(q.x, q.y)) {
                    if (!next_free) next_free = q;
                } else if (q == first && b.pixels.size() > 2 && !attach) {
                    back_to_start = q;
                }
            }
            if (next_free) {
                prev = cur;
                cur = *next_free;
                visited.set(cur.x, cur.y);
                b.pixels.push_back(cur);
                b.polyline.push_back(cur);
                continue;
            }
            if (next_junction) {
                b.polyline.push_back(*next_junction);
                b.end_node = static_cast<std::size_t>(node_of(next_junction->x, next_junction->y));
            } else if (back_to_start) {
                b.polyline.push_back(*back_to_start);
                b.closed_loop = true;
            } else if (node_of(cur.x, cur.y) >= 0) {
                b.end_node = static_cast<std::size_t>(node_of(cur.x, cur.y));
            }
            break;
        }
        finish(b);
    };

    for (const auto& node : g.nodes) {
        if (node.kind != NodeKind::Endpoint) continue;
        Pixel p = node.pixels.front();
        if (!visited(p.x, p.y)) trace(std::nullopt, p);
    }
    for (const auto& node : g.nodes) {
        if (node.kind != NodeKind::Junction) continue;
        for (const auto& jp : node.pixels) {
            for (auto o : kN8) {
                Pixel q{jp.x + o.x, jp.y + o.y};
                if (s.test(q.x, q.y) && !junction(q.x, q.y) && !visited(q.x, q.y)) trace(jp, q);
            }
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (s(x, y) && !junction(x, y) && !visited(x, y)) trace(std::nullopt, {x, y});
        }
    }
    return g;
}

}  // namespace fundusquant
