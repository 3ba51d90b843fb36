#include "fundusquant/image_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "fundusquant/components.hpp"
#include "fundusquant/hull.hpp"

namespace fundusquant {

namespace {
constexpr double kFovFloor = 0.05;
constexpr double kMinFovFraction = 0.10;
}  // namespace

double otsu_threshold(const RealRaster& gray) {
    std::array<double, 256> hist{};
    for (double v : gray.data()) {
        int b = static_cast<int>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
        hist[static_cast<std::size_t>(b)] += 1.0;
    }
    const double total = static_cast<double>(gray.size());
    double sum_all = 0.0;
    int occupied = 0;
    for (int i = 0; i < 256; ++i) {
        sum_all += i * hist[i];
        occupied += hist[i] > 0 ? 1 : 0;
    }
    if (occupied <= 1) return 0.0;

    double w0 = 0.0, sum0 = 0.0, best = -1.0;
    int best_t = 0;
    for (int t = 0; t < 255; ++t) {
        w0 += hist[t];
        sum0 += t * hist[t];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (between > best) {
            best = between;
            best_t = t;
        }
    }
    return (best_t + 0.5) / 255.0;
}

BinaryMask estimate_fov(const RealRaster& gray) {
    const double thr = std::max(otsu_threshold(gray), kFovFloor);
    BinaryMask bright(gray.width(), gray.height());
    for (int y = 0; y < gray.height(); ++y) {
        for (int x = 0; x < gray.width(); ++x) bright(x, y) = gray(x, y) > thr ? 1 : 0;
    }
    if (static_cast<double>(bright.count()) < kMinFovFraction * static_cast<double>(bright.size())) {
        throw Error(ErrorCode::NoFOV, "bright area below 10% of the frame");
    }
    int n_labels = 0;
    const Grid<int> labels = label_components(bright, Connectivity::Eight, &n_labels);
    std::vector<std::size_t> area(static_cast<std::size_t>(n_labels) + 1, 0);
    for (int l : labels.data()) ++area[static_cast<std::size_t>(l)];
    int largest = 1;
    for (int l = 2; l <= n_labels; ++l) {
        if (area[static_cast<std::size_t>(l)] > area[static_cast<std::size_t>(largest)]) largest = l;
    }
    if (static_cast<double>(area[static_cast<std::size_t>(largest)]) < kMinFovFraction * static_cast<double>(bright.size())) {
        throw Error(ErrorCode::NoFOV, "largest bright region below 10% of the frame");
    }
    // the hull only depends on the leftmost and rightmost pixel of each row
    std::vector<Pixel> extremes;
    for (int y = 0; y < gray.height(); ++y) {
        int lo = -1, hi = -1;
        for (int x = 0; x < gray.width(); ++x) {
            if (labels(x, y) != largest) continue;
            if (lo < 0) lo = x;
            hi = x;
        }
        if (lo < 0) continue;
        extremes.push_back({lo, y});
        if (hi != lo) extremes.push_back({hi, y});
    }
    return rasterize_convex_polygon(convex_hull(std::move(extremes)), gray.width(), gray.height());
}

RealRaster masked_gaussian(const RealRaster& values, const BinaryMask& support, double sigma, int x0, int y0, int x1,
                           int y1) {
    const int w = values.width(), h = values.height();
    const double inf = std::numeric_limits<double>::infinity();
    RealRaster out(w, h, inf);
    x0 = std::clamp(x0, 0, w - 1);
    x1 = std::clamp(x1, 0, w - 1);
    y0 = std::clamp(y0, 0, h - 1);
    y1 = std::clamp(y1, 0, h - 1);
    if (x0 > x1 || y0 > y1) return out;

    const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
    for (int i = -r; i <= r; ++i) k[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));

    // masked values and weights over the rows the vertical pass reads, with clamp-to-edge columns
    const int ry0 = std::max(0, y0 - r), ry1 = std::min(h - 1, y1 + r);
    const int cw = x1 - x0 + 1;
    const int ch = ry1 - ry0 + 1;
    const int pw = cw + 2 * r;
    std::vector<double> mv(static_cast<std::size_t>(pw)), m(static_cast<std::size_t>(pw));
    std::vector<double> num(static_cast<std::size_t>(cw) * ch), den(static_cast<std::size_t>(cw) * ch);
    for (int y = ry0; y <= ry1; ++y) {
        for (int i = 0; i < pw; ++i) {
            const int xx = std::clamp(x0 - r + i, 0, w - 1);
            const bool on = support(xx, y) != 0;
            m[static_cast<std::size_t>(i)] = on ? 1.0 : 0.0;
            mv[static_cast<std::size_t>(i)] = on ? values(xx, y) : 0.0;
        }
        double* nrow = &num[static_cast<std::size_t>(y - ry0) * cw];
        double* drow = &den[static_cast<std::size_t>(y - ry0) * cw];
        for (int x = 0; x < cw; ++x) {
            double sn = 0.0, sd = 0.0;
            for (int i = 0; i <= 2 * r; ++i) {
                sn += k[static_cast<std::size_t>(i)] * mv[static_cast<std::size_t>(x + i)];
                sd += k[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(x + i)];
            }
            nrow[x] = sn;
            drow[x] = sd;
        }
    }
    std::vector<double> sn(static_cast<std::size_t>(cw)), sd(static_cast<std::size_t>(cw));
    for (int y = y0; y <= y1; ++y) {
        std::fill(sn.begin(), sn.end(), 0.0);
        std::fill(sd.begin(), sd.end(), 0.0);
        for (int i = -r; i <= r; ++i) {
            const int yy = std::clamp(y + i, 0, h - 1);
            const double kk = k[static_cast<std::size_t>(i + r)];
            const double* nrow = &num[static_cast<std::size_t>(yy - ry0) * cw];
            const double* drow = &den[static_cast<std::size_t>(yy - ry0) * cw];
            for (int x = 0; x < cw; ++x) {
                sn[static_cast<std::size_t>(x)] += kk * nrow[x];
                sd[static_cast<std::size_t>(x)] += kk * drow[x];
            }
        }
        for (int x = 0; x < cw; ++x) {
            out(x0 + x, y) = sd[static_cast<std::size_t>(x)] > 0.0 ? sn[static_cast<std::size_t>(x)] / sd[static_cast<std::size_t>(x)] : inf;
        }
    }
    return out;
}

}  // namespace fundusquant
