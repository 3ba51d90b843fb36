#include "fundusquant/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fundusquant/png_io.hpp"

namespace fundusquant {

namespace {

// Draws from mt19937 are specified by the standard; the mapping to [0, 1) is done here so the
// phantom is identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint32_t seed) : gen_(seed) {}
    double uniform() { return static_cast<double>(gen_()) / 4294967296.0; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937 gen_;
};

void fill_disk(BinaryMask& m, Point c, double r) {
    const int y0 = std::max(0, static_cast<int>(std::floor(c.y - r)));
    const int y1 = std::min(m.height() - 1, static_cast<int>(std::ceil(c.y + r)));
    const int x0 = std::max(0, static_cast<int>(std::floor(c.x - r)));
    const int x1 = std::min(m.width() - 1, static_cast<int>(std::ceil(c.x + r)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - c.x, dy = y - c.y;
            if (dx * dx + dy * dy <= r * r) m.set(x, y);
        }
    }
}

void fill_ellipse(BinaryMask& m, Point c, double a, double b, double angle) {
    const double ca = std::cos(angle), sa = std::sin(angle);
    const double r = std::max(a, b);
    const int y0 = std::max(0, static_cast<int>(std::floor(c.y - r)));
    const int y1 = std::min(m.height() - 1, static_cast<int>(std::ceil(c.y + r)));
    const int x0 = std::max(0, static_cast<int>(std::floor(c.x - r)));
    const int x1 = std::min(m.width() - 1, static_cast<int>(std::ceil(c.x + r)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - c.x, dy = y - c.y;
            const double u = dx * ca + dy * sa, v = -dx * sa + dy * ca;
            if ((u * u) / (a * a) + (v * v) / (b * b) <= 1.0) m.set(x, y);
        }
    }
}

// A gently undulating vessel leaving `origin` at `angle_deg` (anatomical, counter-clockwise).
void draw_vessel(BinaryMask& m, Point origin, double angle_deg, double start, double length, double radius,
                 double wiggle, double period) {
    const double t = angle_deg * std::numbers::pi / 180.0;
    const double ux = std::cos(t), uy = -std::sin(t);
    for (double s = start; s <= start + length; s += 0.5) {
        const double off = wiggle * std::sin(2.0 * std::numbers::pi * (s - start) / period);
        fill_disk(m, {origin.x + s * ux - off * uy, origin.y + s * uy + off * ux}, radius);
    }
}

void clip(BinaryMask& m, const BinaryMask& fov) { m = m & fov; }

}  // namespace

Phantom make_phantom(const PhantomOptions& opt) {
    if (opt.size < 64) throw Error(ErrorCode::TooSmall, "phantom size must be at least 64");
    const int n = opt.size;
    const double k = n / 512.0;
    const double c = (n - 1) / 2.0;
    Rng rng(opt.seed);

    Phantom p{.size = n, .eye = Laterality::OD, .fov = BinaryMask(n, n), .photo = RealRaster(n, n)};
    fill_disk(p.fov, {c, c}, 0.47 * n);

    p.disc_radius = std::round(32.0 * k);
    p.cup_radius = std::round(0.45 * p.disc_radius);
    p.disc_center = {std::round(c + 0.22 * n), std::round(c - 0.02 * n)};
    p.fovea = {p.disc_center.x - std::round(5.0 * p.disc_radius), p.disc_center.y + std::round(0.3 * p.disc_radius)};

    auto mask = [&](ClassId id) -> BinaryMask& {
        auto it = p.masks.find(id);
        if (it == p.masks.end()) it = p.masks.emplace(id, BinaryMask(n, n)).first;
        return it->second;
    };

    fill_disk(mask(class_id::OpticDisc), p.disc_center, p.disc_radius);
    fill_disk(mask(class_id::OpticCup), {p.disc_center.x + 0.1 * p.disc_radius, p.disc_center.y}, p.cup_radius);

    const double reach = 0.62 * n;
    const double art_r = std::max(1.0, std::round(2.0 * k));
    const double vein_r = std::max(1.0, std::round(3.0 * k));
    for (double a : {38.0, 142.0, 218.0, 322.0, 95.0}) {
        draw_vessel(mask(class_id::Artery), p.disc_center, a, 0.7 * p.disc_radius, reach * rng.uniform(0.7, 1.0), art_r,
                    rng.uniform(2.0, 6.0) * k, rng.uniform(60.0, 110.0) * k);
    }
    for (double a : {18.0, 162.0, 198.0, 342.0, 265.0}) {
        draw_vessel(mask(class_id::Vein), p.disc_center, a, 0.7 * p.disc_radius, reach * rng.uniform(0.7, 1.0), vein_r,
                    rng.uniform(2.0, 6.0) * k, rng.uniform(60.0, 110.0) * k);
    }
    // side branches off the temporal arcades
    for (double a : {150.0, 210.0}) {
        const double t = a * std::numbers::pi / 180.0;
        const Point fork{p.disc_center.x + 0.25 * n * std::cos(t), p.disc_center.y - 0.25 * n * std::sin(t)};
        draw_vessel(mask(class_id::Artery), fork, a + (a < 180 ? 30.0 : -30.0), 0.0, 0.12 * n, std::max(1.0, art_r - 1.0),
                    2.0 * k, 50.0 * k);
    }
    clip(mask(class_id::Artery), p.fov);
    clip(mask(class_id::Vein), p.fov);

    if (opt.lesions) {
        // hemorrhages spread over the four quadrants around the fovea
        for (double a : {40.0, 130.0, 230.0, 310.0}) {
            const double t = (a + rng.uniform(-10.0, 10.0)) * std::numbers::pi / 180.0;
            const double d = rng.uniform(2.5, 3.5) * p.disc_radius;
            fill_ellipse(mask(class_id::FirstLesion), {p.fovea.x + d * std::cos(t), p.fovea.y - d * std::sin(t)},
                         rng.uniform(5.0, 9.0) * k, rng.uniform(3.0, 5.0) * k, rng.uniform(0.0, std::numbers::pi));
        }
        // exudate cluster and scattered drusen
        const ClassId exudates = class_id::FirstLesion + 1;
        const ClassId drusen = class_id::FirstLesion + 4;
        for (int i = 0; i < 6; ++i) {
            fill_disk(mask(exudates), {p.fovea.x + rng.uniform(-1.8, -0.8) * p.disc_radius, p.fovea.y + rng.uniform(1.2, 2.0) * p.disc_radius},
                      rng.uniform(1.5, 3.5) * k);
        }
        for (int i = 0; i < 5; ++i) {
            fill_disk(mask(drusen), {p.fovea.x + rng.uniform(-1.5, 1.5) * p.disc_radius, p.fovea.y + rng.uniform(-2.2, -1.2) * p.disc_radius},
                      rng.uniform(2.0, 4.0) * k);
        }
        clip(mask(class_id::FirstLesion), p.fov);
        clip(mask(exudates), p.fov);
        clip(mask(drusen), p.fov);
    }

    if (opt.phenotypes) {
        BinaryMask& tess = mask(class_id::Tessellation);
        for (int i = 0; i < 30; ++i) {
            const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double d = rng.uniform(0.30, 0.43) * n;
            fill_ellipse(tess, {c + d * std::cos(t), c + d * std::sin(t)}, rng.uniform(6.0, 12.0) * k, rng.uniform(1.5, 3.0) * k,
                         rng.uniform(0.0, std::numbers::pi));
        }
        clip(tess, p.fov);

        // temporal crescent beside the disc
        BinaryMask& ppa = mask(class_id::PeripapillaryAtrophy);
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                const double dx = x - p.disc_center.x, dy = y - p.disc_center.y;
                const double r = std::hypot(dx, dy);
                if (r > p.disc_radius && r <= 1.35 * p.disc_radius && dx < -0.3 * p.disc_radius) ppa.set(x, y);
            }
        }
        fill_ellipse(mask(class_id::PatchyAtrophy), {p.fovea.x - 2.0 * p.disc_radius, p.fovea.y - 2.5 * p.disc_radius}, 10.0 * k,
                     7.0 * k, 0.4);
        fill_ellipse(mask(class_id::PatchyAtrophy), {p.fovea.x + 1.0 * p.disc_radius, p.fovea.y + 3.2 * p.disc_radius}, 8.0 * k,
                     6.0 * k, 1.1);
        fill_ellipse(mask(class_id::DiffuseAtrophy), {c - 0.05 * n, c + 0.30 * n}, 40.0 * k, 18.0 * k, 0.2);
        clip(mask(class_id::PatchyAtrophy), p.fov);
        clip(mask(class_id::DiffuseAtrophy), p.fov);
    }

    for (auto it = p.masks.begin(); it != p.masks.end();) {
        it = it->second.empty() ? p.masks.erase(it) : std::next(it);
    }

    // photo: vignetted orange-ish fundus reduced to luminance, bright disc, dark vessels and fovea
    const double sigma_f = 0.8 * p.disc_radius;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (!p.fov(x, y)) continue;
            const double rr = std::hypot(x - c, y - c) / (0.47 * n);
            double v = 0.55 - 0.15 * rr * rr;
            const double df2 = (x - p.fovea.x) * (x - p.fovea.x) + (y - p.fovea.y) * (y - p.fovea.y);
            v -= 0.25 * std::exp(-df2 / (2.0 * sigma_f * sigma_f));
            auto has = [&](ClassId id) {
                auto it = p.masks.find(id);
                return it != p.masks.end() && it->second(x, y);
            };
            if (has(class_id::OpticDisc)) v = 0.88;
            if (has(class_id::OpticCup)) v = 0.96;
            if (has(class_id::Vein)) v -= 0.18;
            if (has(class_id::Artery)) v -= 0.12;
            if (has(class_id::FirstLesion)) v -= 0.10;
            if (has(class_id::FirstLesion + 1) || has(class_id::FirstLesion + 4)) v += 0.15;
            p.photo(x, y) = std::clamp(v, 0.0, 1.0);
        }
    }

    return opt.eye == Laterality::OS ? mirrored(p) : p;
}

Phantom mirrored(const Phantom& p) {
    Phantom m = p;
    const double w1 = p.size - 1;
    m.eye = p.eye == Laterality::OD ? Laterality::OS : (p.eye == Laterality::OS ? Laterality::OD : Laterality::Unknown);
    m.fov = p.fov.mirrored_horizontally();
    for (auto& [id, mask] : m.masks) mask = mask.mirrored_horizontally();
    for (int y = 0; y < p.size; ++y) {
        for (int x = 0; x < p.size; ++x) m.photo(x, y) = p.photo(p.size - 1 - x, y);
    }
    m.disc_center.x = w1 - p.disc_center.x;
    m.fovea.x = w1 - p.fovea.x;
    return m;
}

ImageManifestEntry write_phantom(const Phantom& p, const std::filesystem::path& dir, const std::string& image_id,
                                 bool with_overrides) {
    std::filesystem::create_directories(dir);
    const Registry& reg = Registry::builtin();
    ImageManifestEntry e;
    e.image_id = image_id;
    for (const auto& [id, mask] : p.masks) {
        std::string key = reg.by_id(id).canonical_name;
        std::string file = image_id + "_" + key + ".png";
        std::replace(file.begin(), file.end(), ' ', '_');
        write_mask_png(dir / file, mask);
        e.masks[key] = file;
    }
    RgbImage photo(p.size, p.size);
    for (int y = 0; y < p.size; ++y) {
        for (int x = 0; x < p.size; ++x) {
            const auto v = static_cast<std::uint8_t>(std::lround(p.photo(x, y) * 255.0));
            std::uint8_t* px = photo.at(x, y);
            px[0] = px[1] = px[2] = v;
        }
    }
    const std::string photo_file = image_id + "_photo.png";
    write_rgb_png(dir / photo_file, photo);
    e.photo = photo_file;
    if (with_overrides) {
        e.fovea = p.fovea;
        e.laterality = p.eye;
    }
    return e;
}

}  // namespace fundusquant
