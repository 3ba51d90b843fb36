// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "fundusquant/batch.hpp"
#include "fundusquant/curation.hpp"
#include "fundusquant/distance.hpp"
#include "fundusquant/optic.hpp"
#include "fundusquant/phantom.hpp"
#include "fundusquant/report.hpp"
#include "fundusquant/seg_metrics.hpp"
#include "fundusquant/skeleton.hpp"
#include "fundusquant/vascular.hpp"
#include "support.hpp"

using namespace fundusquant;
using namespace fq_test;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects failed expectations; the first few are kept for the report line.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    Outcome done(const std::string& summary) const {
        if (failures_ == 0) return {true, summary};
        return {false, std::to_string(failures_) + " failed: " + notes_};
    }

private:
    int failures_ = 0;
    std::string notes_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<std::pair<BinaryMask, BinaryMask>> random_pairs() {
    Rng rng(20240501);
    std::vector<std::pair<BinaryMask, BinaryMask>> pairs;
    for (int i = 0; i < 200; ++i) {
        BinaryMask p = random_mask(32, 32, rng);
        BinaryMask g = random_mask(32, 32, rng);
        pairs.emplace_back(std::move(p), std::move(g));
    }
    return pairs;
}

Outcome metric_oracles() {
    Check c;
    const auto t0 = Clock::now();
    const auto pairs = random_pairs();
    std::size_t hd_checked = 0;
    for (const auto& [p, g] : pairs) {
        const PairCounts n = count_oracle(p, g);
        const double d = n.pred + n.gt == 0 ? 1.0 : 2.0 * n.inter / static_cast<double>(n.pred + n.gt);
        const double j = n.uni == 0 ? 1.0 : n.inter / static_cast<double>(n.uni);
        c.expect(dsc(p, g).value == d, "dsc");
        c.expect(jaccard(p, g).value == j, "jaccard");
        const auto pr = precision(p, g);
        if (n.pred == 0) {
            c.expect(!pr.ok(), "precision on empty prediction");
        } else {
            c.expect(pr.value == n.inter / static_cast<double>(n.pred), "precision");
        }
        const auto h = hd95(p, g);
        if (p.empty() != g.empty()) {
            c.expect(!h.ok(), "hd95 with one empty mask");
        } else if (!p.empty()) {
            c.expect(std::abs(*h.value - hd95_oracle(p, g)) <= 1e-9, "hd95 vs exhaustive oracle");
            ++hd_checked;
        }
    }
    const double secs = seconds_since(t0);
    c.expect(secs < 10.0, "runtime " + fmt(secs) + " s");
    return c.done("200 pairs, " + std::to_string(hd_checked) + " hd95 checks, " + fmt(secs) + " s");
}

Outcome cldice_sanity() {
    Check c;
    BinaryMask line(80, 24);
    paint_rect(line, 8, 12, 71, 12);
    c.expect(cldice(line, line).value == 1.0, "identical masks");
    Rng rng(3);
    const BinaryMask blob = blob_mask(40, 40, rng);
    c.expect(cldice(blob, blob).value == 1.0, "identical blob");

    BinaryMask dilated(80, 24);
    for (int x = 8; x <= 71; ++x) paint_disk(dilated, {static_cast<double>(x), 12.0}, 2.0);
    const auto dl = cldice(dilated, line);
    c.expect(dl.ok() && std::abs(*dl.value - 1.0) <= 1e-12, "dilated line " + (dl.ok() ? fmt(*dl.value) : dl.reason));

    BinaryMask half(80, 24);
    paint_rect(half, 8, 12, 39, 12);
    const auto hc = cldice(half, line);
    c.expect(hc.ok() && std::abs(*hc.value - 2.0 / 3.0) <= 0.05, "half coverage " + (hc.ok() ? fmt(*hc.value) : hc.reason));
    return c.done("dilated " + fmt(dl.value.value_or(-1)) + ", half " + fmt(hc.value.value_or(-1)));
}

Outcome jac_dsc_identity() {
    Check c;
    double worst = 0.0;
    for (const auto& [p, g] : random_pairs()) {
        const double d = *dsc(p, g).value, j = *jaccard(p, g).value;
        worst = std::max(worst, std::abs(j - d / (2.0 - d)));
    }
    c.expect(worst <= 1e-12, "max deviation " + fmt(worst));
    return c.done("max deviation " + fmt(worst));
}

Outcome edt_exactness() {
    Check c;
    Rng rng(77);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const BinaryMask m = random_mask(32, 32, rng);
        const RealRaster d = distance_transform(m);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) worst = std::max(worst, std::abs(d(x, y) - edt_oracle(m, x, y)));
    }
    c.expect(worst <= 1e-9, "max error " + fmt(worst));
    return c.done("50 masks, max error " + fmt(worst));
}

double tortuosity_of(const BinaryMask& m) { return tortuosity(skeleton_graph(skeletonize(m), distance_transform(m))); }

Outcome geometry_fixtures() {
    Check c;
    const DiscCupGeometry g = disc_cup_geometry(disk(201, 201, {100, 100}, 60), disk(201, 201, {100, 100}, 30));
    const CupDiscRatios r = cdr(g);
    c.expect(std::abs(r.h_cdr - 0.5) <= 0.02, "h_cdr " + fmt(r.h_cdr));
    c.expect(std::abs(r.v_cdr - 0.5) <= 0.02, "v_cdr " + fmt(r.v_cdr));
    const RimProfile rim = isnt(g, Laterality::OD);
    for (double w : {rim.inferior, rim.superior, *rim.nasal, *rim.temporal}) c.expect(std::abs(w - 30.0) <= 1.0, "rim " + fmt(w));

    const double straight = tortuosity_of(polyline_mask(200, 200, {{5, 190}, {180, 60}}));
    c.expect(std::abs(straight - 1.0) <= 0.02, "straight tortuosity " + fmt(straight));
    const double semi = tortuosity_of(semicircle(50));
    c.expect(std::abs(semi - std::numbers::pi / 2) <= 0.05, "semicircle tortuosity " + fmt(semi));

    BinaryMask line(512, 512), square(512, 512);
    paint_rect(line, 0, 256, 511, 256);
    paint_rect(square, 0, 0, 511, 511);
    const double fl = box_counting_fd(line), fs = box_counting_fd(square);
    c.expect(fl >= 0.95 && fl <= 1.10, "line FD " + fmt(fl));
    c.expect(fs >= 1.90 && fs <= 2.00, "square FD " + fmt(fs));
    return c.done("cdr " + fmt(r.h_cdr) + "/" + fmt(r.v_cdr) + ", rims I/S/N/T " + fmt(rim.inferior) + "/" +
                  fmt(rim.superior) + "/" + fmt(*rim.nasal) + "/" + fmt(*rim.temporal) + ", tortuosity " + fmt(straight) +
                  "/" + fmt(semi) + ", FD " + fmt(fl) + "/" + fmt(fs));
}

Outcome knudtson_properties() {
    Check c;
    Rng rng(99);
    double worst_oracle = 0.0, worst_homog = 0.0, worst_avr = 0.0;
    for (int i = 0; i < 100; ++i) {
        std::array<double, 6> w{};
        for (double& v : w) v = rng.uniform(2.0, 25.0);
        for (double k : {0.88, 0.95}) {
            worst_oracle = std::max(worst_oracle, std::abs(knudtson_equivalent(w, k) - knudtson_six_oracle(w, k)));
        }
        const double s = rng.uniform(0.1, 10.0);
        std::array<double, 6> sw = w;
        for (double& v : sw) v *= s;
        worst_homog = std::max(worst_homog, std::abs(knudtson_equivalent(sw, 0.88) - s * knudtson_equivalent(w, 0.88)));

        std::vector<double> a(w.begin(), w.begin() + 3), v(w.begin() + 3, w.end());
        std::vector<double> sa = a, sv = v;
        for (double& x : sa) x *= s;
        for (double& x : sv) x *= s;
        worst_avr = std::max(worst_avr, std::abs(caliber_summary(sa, sv).avr - caliber_summary(a, v).avr));
    }
    c.expect(worst_oracle <= 1e-9, "oracle " + fmt(worst_oracle));
    c.expect(worst_homog <= 1e-9, "homogeneity " + fmt(worst_homog));
    c.expect(worst_avr <= 1e-9, "AVR scaling " + fmt(worst_avr));
    return c.done("100 sextuples, max deviations " + fmt(worst_oracle) + "/" + fmt(worst_homog) + "/" + fmt(worst_avr));
}

Outcome curation() {
    Check c;
    c.expect(threshold_probmap(ProbMap(64, 64, 0.75), 0.75).empty(), "uniform 0.75 map not empty");
    Rng rng(5);
    ProbMap p(48, 48);
    for (double& v : p.data()) v = rng.uniform();
    BinaryMask prev = threshold_probmap(p, 0.001);
    for (int i = 1; i < 100; ++i) {
        const BinaryMask cur = threshold_probmap(p, i / 100.0);
        c.expect(cur.subset_of(prev), "not monotone at t=" + fmt(i / 100.0));
        prev = cur;
    }
    const CurationVerdict comb_v = topology_filter(comb());
    c.expect(!comb_v.accepted && comb_v.violated_rules() == std::vector<std::string>{"spurs"}, "comb verdict");
    const CurationVerdict tree_v = topology_filter(clean_tree());
    c.expect(tree_v.accepted, "clean tree rejected");
    return c.done("comb rejected with " + std::to_string(comb_v.stats.n_spurs) + " spurs, clean tree accepted");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Manifest phantom_manifest(const std::filesystem::path& dir, int n) {
    Manifest m;
    for (int i = 0; i < n; ++i) {
        const PhantomOptions o{.size = 512, .eye = i % 2 ? Laterality::OS : Laterality::OD, .seed = static_cast<std::uint32_t>(i + 1)};
        ImageManifestEntry e = write_phantom(make_phantom(o), dir, "phantom_" + std::to_string(i));
        e.photo = dir / *e.photo;
        for (auto& [k, v] : e.masks) v = dir / v;
        m.images.push_back(std::move(e));
    }
    return m;
}

// Report paths standing for each row of the feature table.
const std::vector<std::pair<std::string, std::vector<std::string>>> kFamilies{
    {"A/V ratio", {"vessels.avr"}},
    {"CRAE / CRVE", {"vessels.crae", "vessels.crve"}},
    {"fractal dimension", {"vessels.fd_artery", "vessels.fd_vein"}},
    {"tortuosity", {"vessels.tortuosity_artery", "vessels.tortuosity_vein"}},
    {"cup-to-disc ratio", {"optic.h_cdr", "optic.v_cdr"}},
    {"ISNT", {"optic.rim_inferior", "optic.rim_superior", "optic.rim_nasal", "optic.rim_temporal"}},
    {"orientation", {"optic.orientation_disc_deg", "optic.orientation_cup_deg"}},
    {"fovea", {"optic.fovea_x", "optic.fovea_y"}},
    {"morphometry", {"optic.disc_area_px", "optic.cup_area_px"}},
    {"tessellation coverage", {"tessellation.coverage_ratio"}},
    {"tessellation shape", {"tessellation.mean_circularity", "tessellation.mean_aspect_ratio"}},
    {"centroid dispersion", {"tessellation.centroid_dispersion"}},
    {"atrophy metrics",
     {"myopia.diffuse_atrophy.count", "myopia.diffuse_atrophy.area_px", "myopia.diffuse_atrophy.coverage_ratio",
      "myopia.patchy_atrophy.count", "myopia.peripapillary_atrophy.coverage_ratio"}},
    {"global coverage", {"myopia.global_coverage"}},
    {"lesion load", {"lesions.hemorrhage.count", "lesions.hemorrhage.area_px", "lesions.hemorrhage.coverage_ratio"}},
    {"size distribution", {"lesions.hemorrhage.size_small", "lesions.hemorrhage.size_medium", "lesions.hemorrhage.size_large"}},
    {"shape morphology", {"lesions.exudates.mean_circularity", "lesions.exudates.mean_aspect_ratio"}},
    {"spatial localization", {"lesions.drusen.quadrant_center"}},
    {"severity", {"lesions.hemorrhage.severity", "lesion_union.severity"}},
};

bool csv_matches_json(const BiomarkerReport& r, Check& c) {
    const auto j = to_json(r);
    std::istringstream rows(report_csv_rows(r));
    std::string line;
    std::size_t n = 0;
    while (std::getline(rows, line)) {
        if (n >= r.fields.size()) return false;
        const ReportField& f = r.fields[n++];
        std::string pointer = "/" + f.path;
        std::replace(pointer.begin(), pointer.end(), '.', '/');
        const auto& leaf = j.at(nlohmann::ordered_json::json_pointer(pointer));
        std::string value;
        if (leaf["value"].is_string()) {
            value = leaf["value"].get<std::string>();
        } else if (!leaf["value"].is_null()) {
            value = leaf["value"].dump();
        }
        const std::string expect = r.image_id + "," + f.path + "," + value + "," + leaf["status"].get<std::string>() + "," +
                                   (leaf.contains("reason") ? leaf["reason"].get<std::string>() : "");
        c.expect(line == expect, "csv row for " + f.path);
        // the CSV value parses back to the same number
        if (const auto num = f.metric.number()) c.expect(std::stod(value) == *num, "numeric round trip " + f.path);
    }
    return n == r.fields.size();
}

Outcome report_completeness() {
    Check c;
    const auto dir = scratch_dir("acceptance_report");
    const Manifest m = phantom_manifest(dir / "in", 4);

    const auto catalog = metric_catalog();
    const std::size_t distinct = std::set<std::string>(catalog.begin(), catalog.end()).size();
    c.expect(distinct >= 30, "catalog has " + std::to_string(distinct) + " metrics");

    const BatchResult a = run_batch(m, Config{}, 1);
    const BatchResult b = run_batch(m, Config{}, 1);
    const BatchResult w4 = run_batch(m, Config{}, 4);
    c.expect(a.failures.empty() && a.reports.size() == 4, "phantom batch had failures");
    write_batch(a, dir / "run1");
    write_batch(b, dir / "run2");
    write_batch(w4, dir / "run4");
    for (const auto& r : a.reports) {
        const std::string name = r.image_id + ".json";
        const std::string t = slurp(dir / "run1" / name);
        c.expect(!t.empty() && t == slurp(dir / "run2" / name), "rerun differs for " + name);
        c.expect(t == slurp(dir / "run4" / name), "workers=4 differs for " + name);
        c.expect(parse_report(t) == r, "json round trip for " + name);
        c.expect(csv_matches_json(r, c), "csv row count for " + r.image_id);
        for (const auto& [family, paths] : kFamilies) {
            for (const auto& p : paths) {
                const Metric* f = r.find(p);
                c.expect(f && f->ok(), r.image_id + " lacks " + family + " (" + p + ")");
            }
        }
        // phantom eyes are oriented, so quadrants carry anatomical labels
        for (const char* q : {"quadrant_SN", "quadrant_ST", "quadrant_IN", "quadrant_IT"}) {
            const std::string path = std::string("lesions.drusen.") + q;
            c.expect(r.find(path) && r.find(path)->ok(), r.image_id + " lacks " + path);
        }
    }
    c.expect(slurp(dir / "run1" / "reports.csv") == slurp(dir / "run4" / "reports.csv"), "reports.csv differs");
    return c.done(std::to_string(distinct) + " catalog metrics, " + std::to_string(kFamilies.size()) +
                  " feature families present, runs and worker counts byte-identical");
}

// Maps a field of the mirrored-image report to the value it must equal in the original report.
std::optional<std::string> mirror_partner(const std::string& path) {
    if (path == "optic.rim_image_left") return "optic.rim_image_right";
    if (path == "optic.rim_image_right") return "optic.rim_image_left";
    return path;
}

Outcome mirror_consistency() {
    Check c;
    const Phantom od = make_phantom({.size = 512, .seed = 3});
    const Phantom os = mirrored(od);
    auto inputs = [](const Phantom& p, const char* id) {
        QuantifyInputs in;
        in.image_id = id;
        in.masks = p.masks;
        in.photo = p.photo;
        return in;
    };
    const BiomarkerReport a = quantify_masks(inputs(od, "x"));
    const BiomarkerReport b = quantify_masks(inputs(os, "x"));
    const double w1 = od.size - 1;
    c.expect(a.at("context.laterality").value == Metric::Value{std::string("OD")}, "original not OD");
    c.expect(b.at("context.laterality").value == Metric::Value{std::string("OS")}, "mirror not OS");
    std::size_t compared = 0;
    for (const auto& f : a.fields) {
        const std::string& path = f.path;
        // vessel skeleton statistics depend on thinning order, which is not mirror symmetric
        if (path.rfind("vessels.", 0) == 0) continue;
        const Metric& ma = f.metric;
        const Metric& mb = b.at(*mirror_partner(path));
        ++compared;
        if (ma.ok() != mb.ok()) {
            c.expect(false, path + " defined on one side only");
            continue;
        }
        if (!ma.ok()) {
            c.expect(ma.reason == mb.reason, path + " reasons differ");
            continue;
        }
        const bool x_coord = path == "context.disc_center_x" || path == "context.fovea_x" || path == "optic.fovea_x";
        const bool angle = path == "optic.orientation_disc_deg" || path == "optic.orientation_cup_deg";
        if (x_coord) {
            c.expect(std::abs(*ma.number() - (w1 - *mb.number())) <= 1e-9, path);
        } else if (angle) {
            // mirroring negates the angle; -90 and 90 describe the same axis
            double d = std::fmod(std::abs(*ma.number() + *mb.number()), 180.0);
            d = std::min(d, 180.0 - d);
            c.expect(d <= 1e-9, path + " " + fmt(*ma.number()) + " vs " + fmt(*mb.number()));
        } else if (path == "context.laterality") {
            continue;
        } else if (ma.number() && mb.number()) {
            c.expect(std::abs(*ma.number() - *mb.number()) <= 1e-9, path + " " + fmt(*ma.number()) + " vs " + fmt(*mb.number()));
        } else {
            c.expect(ma == mb, path);
        }
    }
    return c.done(std::to_string(compared) + " anatomically oriented fields equal within 1e-9");
}

Outcome performance() {
    Check c;
    const auto dir = scratch_dir("acceptance_perf");
    const Phantom p = make_phantom({.size = 1024, .seed = 2});
    ImageManifestEntry full = write_phantom(p, dir, "big");
    ImageManifestEntry e;
    e.image_id = "big";
    e.photo = dir / *full.photo;
    for (const char* cls : {"Artery", "Vein", "Optic Disc", "Optic Cup", "Tessellation", "Hemorrhage"}) {
        e.masks[cls] = dir / full.masks.at(cls);
    }
    double best = 1e9;
    for (int i = 0; i < 3; ++i) {
        const auto t0 = Clock::now();
        const BiomarkerReport r = quantify_image(e);
        best = std::min(best, seconds_since(t0));
        c.expect(r.at("optic.h_cdr").ok(), "report incomplete");
    }
    c.expect(best < 1.0, "took " + fmt(best) + " s");
    return c.done("1024x1024, 6 classes, best of 3: " + fmt(best) + " s");
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"metric oracle equivalence", metric_oracles},
        {"clDice sanity", cldice_sanity},
        {"JAC-DSC identity", jac_dsc_identity},
        {"EDT exactness", edt_exactness},
        {"geometry fixtures", geometry_fixtures},
        {"Knudtson properties", knudtson_properties},
        {"curation", curation},
        {"report completeness and determinism", report_completeness},
        {"mirror consistency", mirror_consistency},
        {"performance 1024x1024 under 1 s", performance},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& ex) {
            o = {false, std::string("threw: ") + ex.what()};
        }
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
