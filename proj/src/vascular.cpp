#include "fundusquant/vascular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fundusquant/distance.hpp"

namespace fundusquant {

MeasurementZone measurement_annulus(Point center, double disc_radius, const BinaryMask& fov, double inner_factor,
                                    double outer_factor) {
    if (!(disc_radius > 0.0)) throw Error(ErrorCode::DegenerateZone, "disc radius must be positive");
    if (!(inner_factor < outer_factor)) throw Error(ErrorCode::DegenerateZone, "annulus inner factor must be below outer factor");
    MeasurementZone z{inner_factor, outer_factor, center, disc_radius, BinaryMask(fov.width(), fov.height())};
    const double r_in = inner_factor * disc_radius;
    const double r_out = outer_factor * disc_radius;
    const int y0 = std::max(0, static_cast<int>(std::floor(center.y - r_out)));
    const int y1 = std::min(fov.height() - 1, static_cast<int>(std::ceil(center.y + r_out)));
    const int x0 = std::max(0, static_cast<int>(std::floor(center.x - r_out)));
    const int x1 = std::min(fov.width() - 1, static_cast<int>(std::ceil(center.x + r_out)));
    bool any = false;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - center.x, dy = y - center.y;
            const double d2 = dx * dx + dy * dy;
            if (d2 >= r_in * r_in && d2 <= r_out * r_out && fov(x, y)) {
                z.annulus.set(x, y);
                any = true;
            }
        }
    }
    if (!any) throw Error(ErrorCode::DegenerateZone, "measurement annulus does not intersect the field of view");
    return z;
}

MeasurementZone measurement_annulus(const FundusContext& ctx, const VesselConfig& cfg) {
    if (!ctx.disc) throw Error(ErrorCode::DegenerateZone, "no disc geometry");
    return measurement_annulus(ctx.disc->center, ctx.disc->radius, ctx.fov, cfg.annulus_inner, cfg.annulus_outer);
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<BranchWidths> sample_widths(const BinaryMask& vessel, const MeasurementZone& zone, int min_samples) {
    if (!vessel.same_shape(zone.annulus)) throw Error(ErrorCode::ShapeMismatch, "vessel mask and zone differ in size");
    if (vessel.empty()) throw Error(ErrorCode::NoVesselInZone, "vessel mask is empty");
    const RealRaster edt = distance_transform(vessel);
    return sample_widths(skeleton_graph(skeletonize(vessel), edt), edt, zone, min_samples);
}

std::vector<BranchWidths> sample_widths(const SkeletonGraph& graph, const RealRaster& edt, const MeasurementZone& zone,
                                        int min_samples) {
    if (!edt.same_shape(zone.annulus)) throw Error(ErrorCode::ShapeMismatch, "distance map and zone differ in size");
    std::vector<BranchWidths> out;
    for (std::size_t b = 0; b < graph.branches.size(); ++b) {
        const auto& br = graph.branches[b];
        // owned pixels follow the optional attachment pixel in the polyline
        const std::size_t offset = (!br.polyline.empty() && !(br.polyline.front() == br.pixels.front())) ? 1 : 0;
        BranchWidths bw;
        bw.branch = b;
        double pos = 0.0;
        for (std::size_t i = 0; i < br.pixels.size(); ++i) {
            const std::size_t pi = i + offset;
            if (pi > 0) {
                const auto& a = br.polyline[pi - 1];
                const auto& c = br.polyline[pi];
                pos += (a.x != c.x && a.y != c.y) ? std::numbers::sqrt2 : 1.0;
            }
            const Pixel p = br.pixels[i];
            if (zone.annulus(p.x, p.y)) bw.samples.push_back({b, pos, 2.0 * edt(p.x, p.y), p});
        }
        if (static_cast<int>(bw.samples.size()) < min_samples) continue;
        std::vector<double> w;
        w.reserve(bw.samples.size());
        for (const auto& s : bw.samples) w.push_back(s.width);
        bw.median_width = median(std::move(w));
        out.push_back(std::move(bw));
    }
    if (out.empty()) throw Error(ErrorCode::NoVesselInZone, "no branch has enough centreline samples in the zone");
    return out;
}

double knudtson_equivalent(std::span<const double> widths, double coefficient, std::size_t* n_used) {
    if (widths.empty()) throw Error(ErrorCode::InsufficientVessels, "no vessel widths");
    std::vector<double> v(widths.begin(), widths.end());
    for (double w : v) {
        if (!(w > 0.0)) throw Error(ErrorCode::InsufficientVessels, "vessel widths must be positive");
    }
    std::sort(v.begin(), v.end(), std::greater<>());
    if (v.size() > 6) v.resize(6);
    if (n_used) *n_used = v.size();
    const double pad = median(v);
    while (v.size() < 6) v.push_back(pad);

    while (v.size() > 1) {
        std::sort(v.begin(), v.end(), std::greater<>());
        std::vector<double> next;
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n / 2; ++i) {
            const double a = v[i], b = v[n - 1 - i];
            next.push_back(coefficient * std::sqrt(a * a + b * b));
        }
        if (n % 2) next.push_back(v[n / 2]);
        v = std::move(next);
    }
    return v.front();
}

CaliberSummary caliber_summary(std::span<const double> artery_widths, std::span<const double> vein_widths,
                               const VesselConfig& cfg) {
    if (artery_widths.empty()) throw Error(ErrorCode::InsufficientVessels, "artery");
    if (vein_widths.empty()) throw Error(ErrorCode::InsufficientVessels, "vein");
    CaliberSummary s;
    s.crae = knudtson_equivalent(artery_widths, cfg.knudtson_artery, &s.n_arteries_used);
    s.crve = knudtson_equivalent(vein_widths, cfg.knudtson_vein, &s.n_veins_used);
    s.avr = s.crae / s.crve;
    return s;
}

double box_counting_fd(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    const int limit = std::min(w, h) / 4;

    // occupancy pyramid: level k has boxes of size 2^k
    int lw = w, lh = h;
    std::vector<std::uint8_t> occ(mask.data().begin(), mask.data().end());
    std::vector<double> xs, ys;
    for (int s = 2; s <= limit; s *= 2) {
        const int nw = (lw + 1) / 2, nh = (lh + 1) / 2;
        std::vector<std::uint8_t> next(static_cast<std::size_t>(nw) * nh, 0);
        for (int y = 0; y < lh; ++y) {
            for (int x = 0; x < lw; ++x) {
                if (occ[static_cast<std::size_t>(y) * lw + x]) next[static_cast<std::size_t>(y / 2) * nw + x / 2] = 1;
            }
        }
        occ = std::move(next);
        lw = nw;
        lh = nh;
        std::size_t n = 0;
        for (auto b : occ) n += b;
        if (n == 0) break;
        // base-2 logs keep power-of-two counts exact, so a full square gives exactly 2
        xs.push_back(-std::log2(static_cast<double>(s)));
        ys.push_back(std::log2(static_cast<double>(n)));
    }
    if (xs.size() < 3) throw Error(ErrorCode::TooSmall, "fewer than three usable box sizes");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

namespace {

bool touches_zone(const SkeletonBranch& b, const MeasurementZone* zone) {
    if (!zone) return true;
    return std::any_of(b.pixels.begin(), b.pixels.end(), [&](Pixel p) { return zone->annulus.test(p.x, p.y) != 0; });
}

// Mean squared curvature per unit length, from turning angles over a +/-3 vertex stencil.
double curvature_density(const SkeletonBranch& b) {
    const auto& pl = b.polyline;
    constexpr std::size_t k = 3;
    if (pl.size() < 2 * k + 1 || b.arc_length <= 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = k; i + k < pl.size(); ++i) {
        const double ax = pl[i].x - pl[i - k].x, ay = pl[i].y - pl[i - k].y;
        const double bx = pl[i + k].x - pl[i].x, by = pl[i + k].y - pl[i].y;
        const double la = std::hypot(ax, ay), lb = std::hypot(bx, by);
        if (la == 0.0 || lb == 0.0) continue;
        const double turn = std::atan2(ax * by - ay * bx, ax * bx + ay * by);
        const double ds = 0.5 * (la + lb);
        const double kappa = turn / ds;
        acc += kappa * kappa;  // one vertex per unit step
    }
    return acc / b.arc_length;
}

}  // namespace

std::vector<double> branch_tortuosities(const SkeletonGraph& graph, const MeasurementZone* zone, double min_len) {
    std::vector<double> out;
    for (const auto& b : graph.branches) {
        if (b.closed_loop || b.arc_length < min_len || !touches_zone(b, zone)) continue;
        const double chord = b.chord_length();
        if (chord <= 0.0) continue;
        out.push_back(b.arc_length / chord);
    }
    return out;
}

double tortuosity(const SkeletonGraph& graph, const MeasurementZone* zone, const VesselConfig& cfg) {
    double num = 0.0, den = 0.0;
    for (const auto& b : graph.branches) {
        if (b.closed_loop || b.arc_length < cfg.min_branch_len_px || !touches_zone(b, zone)) continue;
        const double chord = b.chord_length();
        if (chord <= 0.0) continue;
        const double value = cfg.tortuosity_mode == TortuosityMode::ArcChord ? b.arc_length / chord : curvature_density(b);
        num += b.arc_length * value;
        den += b.arc_length;
    }
    if (den == 0.0) throw Error(ErrorCode::NoBranches, "no branch of sufficient length");
    return num / den;
}

}  // namespace fundusquant
