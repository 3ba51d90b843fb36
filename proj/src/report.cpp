#include "fundusquant/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fundusquant/components.hpp"
#include "fundusquant/curation.hpp"
#include "fundusquant/distance.hpp"
#include "fundusquant/image_ops.hpp"
#include "fundusquant/lesion.hpp"
#include "fundusquant/optic.hpp"
#include "fundusquant/phenotype.hpp"
#include "fundusquant/png_io.hpp"
#include "fundusquant/skeleton.hpp"
#include "fundusquant/vascular.hpp"

namespace fundusquant {

using nlohmann::ordered_json;

std::optional<double> Metric::number() const {
    if (!ok()) return std::nullopt;
    if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&value)) return *d;
    return std::nullopt;
}

const Metric* BiomarkerReport::find(std::string_view path) const {
    for (const auto& f : fields) {
        if (f.path == path) return &f.metric;
    }
    return nullptr;
}

const Metric& BiomarkerReport::at(std::string_view path) const {
    const Metric* m = find(path);
    if (!m) throw std::out_of_range("report has no field " + std::string(path));
    return *m;
}

std::string class_key(const TargetClass& c) {
    std::string k = normalize_class_name(c.canonical_name);
    std::replace(k.begin(), k.end(), ' ', '_');
    return k;
}

namespace {

const char* kMissing = "MissingInput";

std::string reason_of(const Error& e) { return std::string(code_name(e.code())); }

class FieldWriter {
public:
    explicit FieldWriter(BiomarkerReport& r) : r_(r) {}

    void put(const std::string& path, Metric m) {
        if (auto* d = std::get_if<double>(&m.value); d && !std::isfinite(*d)) m = Metric::undefined("NonFinite");
        r_.fields.push_back({path, std::move(m)});
    }
    void undefined(const std::string& path, const std::string& why) { put(path, Metric::undefined(why)); }
    void undefined(std::initializer_list<std::string> paths, const std::string& prefix, const std::string& why) {
        for (const auto& p : paths) undefined(prefix + p, why);
    }

private:
    BiomarkerReport& r_;
};

const std::vector<std::string> kVesselFields{"crae",        "crve",         "avr",           "n_arteries_used",
                                             "n_veins_used", "crae_um",     "crve_um",       "fd_artery",
                                             "fd_vein",     "tortuosity_artery", "tortuosity_vein"};
const std::vector<std::string> kOpticFields{"disc_area_px",   "cup_area_px",     "h_cdr",          "v_cdr",
                                            "area_cdr",       "rim_inferior",    "rim_superior",   "rim_nasal",
                                            "rim_temporal",   "rim_image_left",  "rim_image_right", "isnt_satisfied",
                                            "ray_misses",     "orientation_disc_deg", "orientation_cup_deg", "cup_clipped",
                                            "fovea_x",        "fovea_y"};
const std::vector<std::string> kTessFields{"count", "coverage_ratio", "mean_circularity", "mean_aspect_ratio",
                                           "centroid_dispersion"};
const std::vector<std::string> kMyopiaTypes{"peripapillary_atrophy", "diffuse_atrophy", "patchy_atrophy"};
const std::vector<std::string> kAtrophyFields{"count", "area_px", "coverage_ratio"};
const std::vector<std::string> kLesionFields{"count",          "area_px",          "coverage_ratio",
                                             "size_small",     "size_medium",      "size_large",
                                             "size_basis",     "mean_circularity", "mean_aspect_ratio", "quadrant_1",
                                             "quadrant_2",     "quadrant_3",       "quadrant_4",
                                             "quadrant_center", "severity"};
const std::vector<std::string> kContextFields{"fov_area_px", "fov_source",  "disc_center_x", "disc_center_y",
                                              "disc_radius", "fovea_x",     "fovea_y",       "fovea_source",
                                              "laterality",  "laterality_source", "um_per_px"};

const BinaryMask* supplied(const QuantifyInputs& in, ClassId id) {
    auto it = in.masks.find(id);
    return it == in.masks.end() ? nullptr : &it->second;
}

void put_all(FieldWriter& w, const std::string& prefix, const std::vector<std::string>& names, const std::string& why) {
    for (const auto& n : names) w.undefined(prefix + n, why);
}

std::string source_name(Source s) { return std::string(to_string(s)); }

void context_block(FieldWriter& w, const FundusContext& ctx, const std::string& fov_source, const QuantifyInputs& in,
                   std::optional<std::string> disc_reason) {
    const std::string p = "context.";
    w.put(p + "fov_area_px", Metric::of(ctx.fov_area()));
    w.put(p + "fov_source", Metric::of(fov_source));
    if (ctx.disc) {
        w.put(p + "disc_center_x", Metric::of(ctx.disc->center.x));
        w.put(p + "disc_center_y", Metric::of(ctx.disc->center.y));
        w.put(p + "disc_radius", Metric::of(ctx.disc->radius));
    } else {
        for (const char* n : {"disc_center_x", "disc_center_y", "disc_radius"}) w.undefined(p + n, *disc_reason);
    }
    if (ctx.fovea) {
        w.put(p + "fovea_x", Metric::of(ctx.fovea->x));
        w.put(p + "fovea_y", Metric::of(ctx.fovea->y));
        w.put(p + "fovea_source", Metric::of(source_name(ctx.fovea_source)));
    } else {
        const std::string why = in.photo && ctx.disc ? "FoveaNotFound" : kMissing;
        for (const char* n : {"fovea_x", "fovea_y", "fovea_source"}) w.undefined(p + n, why);
    }
    w.put(p + "laterality", Metric::of(std::string(to_string(ctx.laterality))));
    w.put(p + "laterality_source", Metric::of(source_name(ctx.laterality_source)));
    if (in.um_per_px) {
        w.put(p + "um_per_px", Metric::of(*in.um_per_px));
    } else {
        w.undefined(p + "um_per_px", kMissing);
    }
}

// FOV-restricted vessel tree, skeletonised once for calibers, complexity and tortuosity.
struct VesselTree {
    BinaryMask mask;
    RealRaster edt;
    BinaryMask skeleton;
    SkeletonGraph graph;

    VesselTree(const BinaryMask& vessel, const BinaryMask& fov)
        : mask(vessel & fov), edt(distance_transform(mask)), skeleton(skeletonize(mask)), graph(skeleton_graph(skeleton, edt)) {}
};

// Per-branch median widths of one vessel class inside the zone.
std::vector<double> branch_medians(const VesselTree& tree, const MeasurementZone& zone, const VesselConfig& cfg) {
    if (tree.mask.empty()) throw Error(ErrorCode::NoVesselInZone, "vessel mask is empty");
    std::vector<double> out;
    for (const auto& b : sample_widths(tree.graph, tree.edt, zone, cfg.min_zone_samples)) out.push_back(b.median_width);
    return out;
}

void vessel_block(FieldWriter& w, const QuantifyInputs& in, const FundusContext& ctx, const Config& cfg) {
    const std::string p = "vessels.";
    const BinaryMask* art = supplied(in, class_id::Artery);
    const BinaryMask* vein = supplied(in, class_id::Vein);
    const std::optional<VesselTree> art_tree = art ? std::optional<VesselTree>(std::in_place, *art, ctx.fov) : std::nullopt;
    const std::optional<VesselTree> vein_tree = vein ? std::optional<VesselTree>(std::in_place, *vein, ctx.fov) : std::nullopt;

    // calibers
    std::string caliber_reason;
    std::optional<CaliberSummary> cal;
    if (!art || !vein) {
        caliber_reason = kMissing;
    } else if (!ctx.disc) {
        caliber_reason = "NoDisc";
    } else {
        try {
            const MeasurementZone zone = measurement_annulus(ctx, cfg.vessel);
            std::vector<double> aw, vw;
            try {
                aw = branch_medians(*art_tree, zone, cfg.vessel);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoVesselInZone) throw;
            }
            try {
                vw = branch_medians(*vein_tree, zone, cfg.vessel);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoVesselInZone) throw;
            }
            if (aw.empty() || vw.empty()) throw Error(ErrorCode::NoVesselInZone, "no measurable vessel in the zone");
            cal = caliber_summary(aw, vw, cfg.vessel);
        } catch (const Error& e) {
            caliber_reason = reason_of(e);
        }
    }
    if (cal) {
        w.put(p + "crae", Metric::of(cal->crae));
        w.put(p + "crve", Metric::of(cal->crve));
        w.put(p + "avr", Metric::of(cal->avr));
        w.put(p + "n_arteries_used", Metric::of(cal->n_arteries_used));
        w.put(p + "n_veins_used", Metric::of(cal->n_veins_used));
        if (in.um_per_px) {
            w.put(p + "crae_um", Metric::of(cal->crae * *in.um_per_px));
            w.put(p + "crve_um", Metric::of(cal->crve * *in.um_per_px));
        } else {
            w.undefined(p + "crae_um", kMissing);
            w.undefined(p + "crve_um", kMissing);
        }
    } else {
        for (const char* n : {"crae", "crve", "avr", "n_arteries_used", "n_veins_used", "crae_um", "crve_um"}) {
            w.undefined(p + n, caliber_reason);
        }
    }

    // complexity and tortuosity over the FOV-restricted tree
    struct Shape {
        Metric fd, tort;
    };
    auto shape_of = [&](const std::optional<VesselTree>& t) -> Shape {
        if (!t) return {Metric::undefined(kMissing), Metric::undefined(kMissing)};
        if (t->mask.empty()) return {Metric::undefined("EmptyMask"), Metric::undefined("EmptyMask")};
        Shape s;
        try {
            s.fd = Metric::of(box_counting_fd(t->skeleton));
        } catch (const Error& e) {
            s.fd = Metric::undefined(reason_of(e));
        }
        try {
            s.tort = Metric::of(tortuosity(t->graph, nullptr, cfg.vessel));
        } catch (const Error& e) {
            s.tort = Metric::undefined(reason_of(e));
        }
        return s;
    };
    Shape a = shape_of(art_tree), v = shape_of(vein_tree);
    w.put(p + "fd_artery", a.fd);
    w.put(p + "fd_vein", v.fd);
    w.put(p + "tortuosity_artery", a.tort);
    w.put(p + "tortuosity_vein", v.tort);
}

void optic_block(FieldWriter& w, const QuantifyInputs& in, const FundusContext& ctx, const Config& cfg,
                 const std::optional<BinaryMask>& disc_mask, const std::string& disc_reason) {
    const std::string p = "optic.";
    if (!ctx.disc || !disc_mask) {
        for (const auto& n : kOpticFields) {
            if (n == "fovea_x" || n == "fovea_y") continue;
            w.undefined(p + n, disc_reason);
        }
    } else {
        const BinaryMask* cup = supplied(in, class_id::OpticCup);
        const BinaryMask no_cup(disc_mask->width(), disc_mask->height());
        const DiscCupGeometry g = disc_cup_geometry(*disc_mask, cup ? *cup : no_cup, cfg.optic.cdr_mode);
        const std::string cup_reason = cup ? "NoCup" : kMissing;
        w.put(p + "disc_area_px", Metric::of(g.disc_area));
        if (g.has_cup()) {
            w.put(p + "cup_area_px", Metric::of(g.cup_area));
            const CupDiscRatios r = cdr(g);
            w.put(p + "h_cdr", Metric::of(r.h_cdr));
            w.put(p + "v_cdr", Metric::of(r.v_cdr));
            w.put(p + "area_cdr", Metric::of(r.area_cdr));
            const RimProfile rim = isnt(g, ctx.laterality, cfg.optic, &ctx.fov, ctx.disc_right_convention);
            w.put(p + "rim_inferior", Metric::of(rim.inferior));
            w.put(p + "rim_superior", Metric::of(rim.superior));
            if (rim.nasal) {
                w.put(p + "rim_nasal", Metric::of(*rim.nasal));
                w.put(p + "rim_temporal", Metric::of(*rim.temporal));
            } else {
                w.undefined(p + "rim_nasal", "Unoriented");
                w.undefined(p + "rim_temporal", "Unoriented");
            }
            w.put(p + "rim_image_left", Metric::of(rim.image_left));
            w.put(p + "rim_image_right", Metric::of(rim.image_right));
            if (rim.isnt_satisfied) {
                w.put(p + "isnt_satisfied", Metric::of(*rim.isnt_satisfied));
            } else {
                w.undefined(p + "isnt_satisfied", "Unoriented");
            }
            w.put(p + "ray_misses", Metric::of(rim.ray_misses));
        } else {
            for (const char* n : {"cup_area_px", "h_cdr", "v_cdr", "area_cdr", "rim_inferior", "rim_superior", "rim_nasal",
                                  "rim_temporal", "rim_image_left", "rim_image_right", "isnt_satisfied", "ray_misses"}) {
                w.undefined(p + n, cup_reason);
            }
        }
        w.put(p + "orientation_disc_deg", Metric::of(g.orientation_disc));
        if (g.orientation_cup) {
            w.put(p + "orientation_cup_deg", Metric::of(*g.orientation_cup));
        } else {
            w.undefined(p + "orientation_cup_deg", cup_reason);
        }
        w.put(p + "cup_clipped", Metric::of(g.cup_clipped));
    }
    if (ctx.fovea) {
        w.put(p + "fovea_x", Metric::of(ctx.fovea->x));
        w.put(p + "fovea_y", Metric::of(ctx.fovea->y));
    } else {
        const std::string why = in.photo && ctx.disc ? "FoveaNotFound" : kMissing;
        w.undefined(p + "fovea_x", why);
        w.undefined(p + "fovea_y", why);
    }
}

void tessellation_block(FieldWriter& w, const QuantifyInputs& in, const FundusContext& ctx, const Config& cfg) {
    const std::string p = "tessellation.";
    const BinaryMask* m = supplied(in, class_id::Tessellation);
    if (!m) {
        put_all(w, p, kTessFields, kMissing);
        return;
    }
    const TessellationStats t = tessellation_stats(*m, ctx, cfg.phenotype);
    w.put(p + "count", Metric::of(t.count));
    w.put(p + "coverage_ratio", Metric::of(t.coverage_ratio));
    w.put(p + "mean_circularity", t.mean_circularity ? Metric::of(*t.mean_circularity) : Metric::undefined("EmptyMask"));
    w.put(p + "mean_aspect_ratio", t.mean_aspect_ratio ? Metric::of(*t.mean_aspect_ratio) : Metric::undefined("EmptyMask"));
    w.put(p + "centroid_dispersion", Metric::of(t.centroid_dispersion));
}

void myopia_block(FieldWriter& w, const QuantifyInputs& in, const FundusContext& ctx) {
    const std::string p = "myopia.";
    const std::array<const BinaryMask*, 3> masks{supplied(in, class_id::PeripapillaryAtrophy),
                                                 supplied(in, class_id::DiffuseAtrophy),
                                                 supplied(in, class_id::PatchyAtrophy)};
    const MyopiaStats s = myopia_stats(masks, ctx);
    bool any = false;
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string q = p + kMyopiaTypes[i] + ".";
        if (!masks[i]) {
            put_all(w, q, kAtrophyFields, kMissing);
            continue;
        }
        any = true;
        w.put(q + "count", Metric::of(s.types[i].count));
        w.put(q + "area_px", Metric::of(s.types[i].area_px));
        w.put(q + "coverage_ratio", Metric::of(s.types[i].coverage_ratio));
    }
    w.put(p + "global_coverage", any ? Metric::of(s.global_coverage) : Metric::undefined(kMissing));
}

void lesion_fields(FieldWriter& w, const std::string& p, const LesionStats& s, SizeBinMode mode) {
    const char* basis = mode == SizeBinMode::DiscRelative && !s.size_bins_fell_back ? "disc_area" : "pixels";
    w.put(p + "count", Metric::of(s.count));
    w.put(p + "area_px", Metric::of(s.total_area_px));
    w.put(p + "coverage_ratio", Metric::of(s.coverage_ratio));
    w.put(p + "size_small", Metric::of(s.size_histogram.small));
    w.put(p + "size_medium", Metric::of(s.size_histogram.medium));
    w.put(p + "size_large", Metric::of(s.size_histogram.large));
    w.put(p + "size_basis", Metric::of(basis));
    w.put(p + "mean_circularity", s.mean_circularity ? Metric::of(*s.mean_circularity) : Metric::undefined("EmptyMask"));
    w.put(p + "mean_aspect_ratio", s.mean_aspect_ratio ? Metric::of(*s.mean_aspect_ratio) : Metric::undefined("EmptyMask"));
    const auto labels = s.quadrants.labels();
    for (std::size_t i = 0; i < 4; ++i) w.put(p + "quadrant_" + std::string(labels[i]), Metric::of(s.quadrants.counts[i]));
    w.put(p + "quadrant_center", Metric::of(s.quadrants.centered_on_fov ? "fov_centroid" : "fovea"));
    w.put(p + "severity", Metric::of(std::string(to_string(s.severity))));
}

std::array<std::string, 4> quadrant_labels_for(const FundusContext& ctx, QuadrantMode mode) {
    QuadrantCounts q;
    q.mode = mode;
    q.oriented = ctx.oriented();
    const auto l = q.labels();
    return {std::string(l[0]), std::string(l[1]), std::string(l[2]), std::string(l[3])};
}

void lesion_block(FieldWriter& w, const QuantifyInputs& in, const FundusContext& ctx, const Config& cfg,
                  const Registry& reg) {
    BinaryMask all(ctx.fov.width(), ctx.fov.height());
    bool any = false;
    const auto labels = quadrant_labels_for(ctx, cfg.lesion.quadrant_mode);
    for (const auto& c : reg.classes()) {
        if (c.group != ClassGroup::Lesion) continue;
        const BinaryMask* m = supplied(in, c.id);
        if (c.granularity != "coarse" && !m) continue;
        const std::string p = "lesions." + class_key(c) + ".";
        if (!m) {
            for (const auto& n : kLesionFields) {
                const std::string name = n.rfind("quadrant_", 0) == 0 && n != "quadrant_center"
                                             ? "quadrant_" + labels[static_cast<std::size_t>(n.back() - '1')]
                                             : n;
                w.undefined(p + name, kMissing);
            }
            continue;
        }
        any = true;
        all = all | *m;
        lesion_fields(w, p, lesion_stats(*m, c, ctx, cfg.lesion), cfg.lesion.size_mode);
    }
    const std::string p = "lesion_union.";
    if (!any) {
        for (const char* n : {"count", "area_px", "coverage_ratio", "severity"}) w.undefined(p + n, kMissing);
        return;
    }
    w.put(p + "count", Metric::of(count_components(all, Connectivity::Eight)));
    w.put(p + "area_px", Metric::of(all.count()));
    const double cov = coverage_ratio(all, ctx.fov);
    w.put(p + "coverage_ratio", Metric::of(cov));
    w.put(p + "severity", Metric::of(std::string(to_string(severity_grade(cov, cfg.lesion.severity_bins)))));
}

std::pair<int, int> input_shape(const QuantifyInputs& in) {
    std::optional<std::pair<int, int>> shape;
    auto check = [&](int w, int h, const std::string& what) {
        if (!shape) {
            shape = {w, h};
        } else if (shape->first != w || shape->second != h) {
            throw Error(ErrorCode::ShapeMismatch, in.image_id + ": " + what + " differs in size from the other inputs");
        }
    };
    for (const auto& [id, m] : in.masks) check(m.width(), m.height(), "mask " + std::to_string(id));
    if (!shape) throw Error(ErrorCode::ManifestError, in.image_id + ": no mask supplied");
    if (in.photo) check(in.photo->width(), in.photo->height(), "photo");
    return *shape;
}

std::optional<BinaryMask> disc_union(const QuantifyInputs& in) {
    const BinaryMask* disc = supplied(in, class_id::OpticDisc);
    if (!disc) return std::nullopt;
    const BinaryMask* cup = supplied(in, class_id::OpticCup);
    return cup ? (*disc | *cup) : *disc;
}

}  // namespace

FundusContext pipeline_context(const QuantifyInputs& in, const Config& cfg, std::string* fov_source) {
    const auto [w, h] = input_shape(in);
    const std::optional<BinaryMask> disc = disc_union(in);
    const BinaryMask none(w, h);
    const BinaryMask& disc_mask = disc ? *disc : none;

    BinaryMask fov = ~none;
    std::string source = "full_frame";
    if (in.photo) {
        try {
            fov = estimate_fov(*in.photo);
            source = "photo";
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoFOV) throw;
            source = "full_frame_fallback";
        }
    }
    if (fov_source) *fov_source = source;

    if (disc_mask.empty() && !in.overrides.fovea && !in.overrides.laterality) {
        FundusContext ctx{.fov = fov};
        ctx.disc_right_convention = cfg.laterality.disc_right_of_fovea;
        return ctx;
    }
    return build_context(disc_mask, in.photo ? &*in.photo : nullptr, in.overrides, cfg, &fov);
}

BiomarkerReport quantify_masks(const QuantifyInputs& in, const Config& cfg, const Registry& reg) {
    BiomarkerReport r;
    r.image_id = in.image_id;
    r.config_fingerprint = cfg.fingerprint();

    std::string fov_source;
    const FundusContext ctx = pipeline_context(in, cfg, &fov_source);
    const std::optional<BinaryMask> disc = disc_union(in);
    const std::string disc_reason = disc ? "NoDisc" : kMissing;

    FieldWriter w(r);
    context_block(w, ctx, fov_source, in, disc_reason);
    vessel_block(w, in, ctx, cfg);
    optic_block(w, in, ctx, cfg, disc, disc_reason);
    tessellation_block(w, in, ctx, cfg);
    myopia_block(w, in, ctx);
    lesion_block(w, in, ctx, cfg, reg);
    return r;
}

QuantifyInputs load_inputs(const ImageManifestEntry& e, const Config& cfg, const Registry& reg) {
    QuantifyInputs in;
    in.image_id = e.image_id;
    in.overrides.fovea = e.fovea;
    in.overrides.laterality = e.laterality;
    in.um_per_px = e.um_per_px;
    if (e.photo) in.photo = read_gray_png(*e.photo);
    if (e.label_map) {
        const LabelMap labels = read_label_png(*e.label_map);
        for (const auto& c : reg.classes()) {
            BinaryMask m = labels.select(c.id);
            if (c.granularity == "coarse" || !m.empty()) in.masks.insert_or_assign(c.id, std::move(m));
        }
    }
    for (const auto& [name, path] : e.masks) in.masks.insert_or_assign(reg.parse_class(name).id, read_mask_png(path));
    for (const auto& [name, path] : e.prob_maps) {
        const ClassId id = reg.parse_class(name).id;
        if (in.masks.count(id)) continue;
        ProbMap p = read_prob_png(path);
        in.masks.emplace(id, threshold_probmap(p, cfg.curation.threshold));
    }
    if (in.masks.empty()) throw Error(ErrorCode::ManifestError, e.image_id + ": no mask source");
    input_shape(in);
    return in;
}

BiomarkerReport quantify_image(const ImageManifestEntry& entry, const Config& cfg, const Registry& reg) {
    return quantify_masks(load_inputs(entry, cfg, reg), cfg, reg);
}

std::vector<std::string> metric_catalog() {
    std::vector<std::string> out;
    for (const auto& n : kContextFields) out.push_back("context." + n);
    for (const auto& n : kVesselFields) out.push_back("vessels." + n);
    for (const auto& n : kOpticFields) out.push_back("optic." + n);
    for (const auto& n : kTessFields) out.push_back("tessellation." + n);
    for (const auto& t : kMyopiaTypes) {
        for (const auto& n : kAtrophyFields) out.push_back("myopia." + t + "." + n);
    }
    out.push_back("myopia.global_coverage");
    for (const auto& n : kLesionFields) out.push_back("lesions.*." + n);
    for (const char* n : {"count", "area_px", "coverage_ratio", "severity"}) out.push_back(std::string("lesion_union.") + n);
    return out;
}

// ---- serialization ----

namespace {

ordered_json leaf_json(const Metric& m) {
    ordered_json j = ordered_json::object();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                j["value"] = nullptr;
            } else {
                j["value"] = v;
            }
        },
        m.value);
    if (m.ok()) {
        j["status"] = "ok";
    } else {
        j["status"] = "undefined";
        j["reason"] = m.reason;
    }
    return j;
}

Metric leaf_from_json(const ordered_json& j, const std::string& path) {
    auto fail = [&](const std::string& why) { throw Error(ErrorCode::DecodeError, "report field " + path + ": " + why); };
    if (!j.contains("status") || !j["status"].is_string()) fail("missing status");
    const std::string status = j["status"].get<std::string>();
    if (status == "undefined") {
        if (!j.contains("reason") || !j["reason"].is_string()) fail("undefined value without reason");
        return Metric::undefined(j["reason"].get<std::string>());
    }
    if (status != "ok" || !j.contains("value")) fail("bad status");
    const auto& v = j["value"];
    if (v.is_boolean()) return Metric::of(v.get<bool>());
    if (v.is_number_integer()) return Metric::of(v.get<std::int64_t>());
    if (v.is_number_float()) return Metric::of(v.get<double>());
    if (v.is_string()) return Metric::of(v.get<std::string>());
    fail("unsupported value type");
    return {};
}

void collect(const ordered_json& j, const std::string& prefix, std::vector<ReportField>& out) {
    for (const auto& [k, v] : j.items()) {
        const std::string path = prefix.empty() ? k : prefix + "." + k;
        if (!v.is_object()) throw Error(ErrorCode::DecodeError, "report field " + path + " is not an object");
        if (v.contains("status")) {
            out.push_back({path, leaf_from_json(v, path)});
        } else {
            collect(v, path, out);
        }
    }
}

}  // namespace

ordered_json to_json(const BiomarkerReport& r) {
    ordered_json j = ordered_json::object();
    j["schema"] = r.schema;
    j["artifact_version"] = r.artifact_version;
    j["config_fingerprint"] = r.config_fingerprint;
    j["image_id"] = r.image_id;
    for (const auto& f : r.fields) {
        ordered_json* node = &j;
        std::size_t start = 0;
        for (;;) {
            const std::size_t dot = f.path.find('.', start);
            if (dot == std::string::npos) break;
            node = &(*node)[f.path.substr(start, dot - start)];
            start = dot + 1;
        }
        (*node)[f.path.substr(start)] = leaf_json(f.metric);
    }
    return j;
}

BiomarkerReport report_from_json(const ordered_json& j) {
    if (!j.is_object()) throw Error(ErrorCode::DecodeError, "report must be a JSON object");
    BiomarkerReport r;
    ordered_json blocks = ordered_json::object();
    for (const auto& [k, v] : j.items()) {
        if (k == "schema" || k == "artifact_version" || k == "config_fingerprint" || k == "image_id") {
            if (!v.is_string()) throw Error(ErrorCode::DecodeError, "report header field " + k + " must be a string");
            const std::string s = v.get<std::string>();
            if (k == "schema") r.schema = s;
            if (k == "artifact_version") r.artifact_version = s;
            if (k == "config_fingerprint") r.config_fingerprint = s;
            if (k == "image_id") r.image_id = s;
        } else {
            blocks[k] = v;
        }
    }
    if (r.schema != kReportSchema) throw Error(ErrorCode::DecodeError, "unsupported report schema '" + r.schema + "'");
    collect(blocks, "", r.fields);
    return r;
}

std::string serialize_report(const BiomarkerReport& r) { return to_json(r).dump(2) + "\n"; }

BiomarkerReport parse_report(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::DecodeError, std::string("report is not valid JSON: ") + e.what());
    }
    return report_from_json(j);
}

std::string format_value(const Metric& m) {
    if (!m.ok()) return {};
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return {};
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                return ordered_json(v).dump();
            }
        },
        m.value);
}

std::string report_csv_rows(const BiomarkerReport& r) {
    std::string out;
    for (const auto& f : r.fields) {
        out += r.image_id;
        out += ',';
        out += f.path;
        out += ',';
        out += format_value(f.metric);
        out += ',';
        out += f.metric.ok() ? "ok" : "undefined";
        out += ',';
        out += f.metric.reason;
        out += '\n';
    }
    return out;
}

}  // namespace fundusquant
