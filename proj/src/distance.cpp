#include "fundusquant/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fundusquant {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

// 1-D lower envelope of parabolas (q - v)^2 + f(v) over finite f; writes exact minima to d.
void envelope_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d, std::vector<int>& v,
                 std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        const double fq = static_cast<double>(f[q]) + static_cast<double>(q) * q;
        while (k >= 0) {
            const int p = v[k];
            const double fp = static_cast<double>(f[p]) + static_cast<double>(p) * p;
            const double s = (fq - fp) / (2.0 * (q - p));
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = k == 0 ? -std::numeric_limits<double>::infinity()
                      : (fq - static_cast<double>(f[v[k - 1]]) - static_cast<double>(v[k - 1]) * v[k - 1]) /
                            (2.0 * (q - v[k - 1]));
    }
    if (k < 0) {
        std::fill(d.begin(), d.end(), kInf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (j < k && z[j + 1] < q) ++j;
        // evaluate neighbours too so boundary rounding in z never costs exactness
        std::int64_t best = kInf;
        for (int t = std::max(0, j - 1); t <= std::min(k, j + 1); ++t) {
            const std::int64_t dq = q - v[t];
            best = std::min(best, dq * dq + f[v[t]]);
        }
        d[q] = best;
    }
}

}  // namespace

Grid<std::int64_t> squared_distance_to_sites(const BinaryMask& sites, bool frame_is_site) {
    const int w = sites.width(), h = sites.height();
    // vertical distance to the nearest site in the same column, by a downward and an upward scan
    // in row order; the frame sits one pixel outside rows 0 and h-1 when it counts as a site
    constexpr std::int32_t kFar = std::numeric_limits<std::int32_t>::max() / 2;
    const std::int32_t edge = frame_is_site ? 0 : kFar;
    Grid<std::int32_t> col(w, h);
    for (int x = 0; x < w; ++x) col(x, 0) = sites(x, 0) ? 0 : std::min(edge + 1, kFar);
    for (int y = 1; y < h; ++y) {
        for (int x = 0; x < w; ++x) col(x, y) = sites(x, y) ? 0 : std::min(col(x, y - 1) + 1, kFar);
    }
    for (int x = 0; x < w; ++x) col(x, h - 1) = std::min(col(x, h - 1), std::min(edge + 1, kFar));
    for (int y = h - 2; y >= 0; --y) {
        for (int x = 0; x < w; ++x) col(x, y) = std::min(col(x, y), std::min(col(x, y + 1) + 1, kFar));
    }

    // horizontal lower envelope per row; the frame adds one site column on each side
    const int pad = frame_is_site ? 1 : 0;
    const int n = w + 2 * pad;
    std::vector<std::int64_t> f(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n));
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);
    Grid<std::int64_t> out(w, h);
    for (int y = 0; y < h; ++y) {
        if (pad) f.front() = f.back() = 0;
        for (int x = 0; x < w; ++x) {
            const std::int64_t c = col(x, y);
            f[static_cast<std::size_t>(x + pad)] = c >= kFar ? kInf : c * c;
        }
        envelope_1d(f, d, v, z);
        for (int x = 0; x < w; ++x) out(x, y) = d[static_cast<std::size_t>(x + pad)];
    }
    return out;
}

RealRaster distance_transform(const BinaryMask& mask) {
    const auto sq = squared_distance_to_sites(~mask, true);
    RealRaster out(mask.width(), mask.height(), 0.0);
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (mask(x, y)) out(x, y) = std::sqrt(static_cast<double>(sq(x, y)));
        }
    }
    return out;
}

}  // namespace fundusquant
