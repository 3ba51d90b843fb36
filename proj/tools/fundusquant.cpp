#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fundusquant/batch.hpp"
#include "fundusquant/config.hpp"
#include "fundusquant/curation.hpp"
#include "fundusquant/manifest.hpp"
#include "fundusquant/overlay.hpp"
#include "fundusquant/phantom.hpp"
#include "fundusquant/png_io.hpp"
#include "fundusquant/report.hpp"
#include "fundusquant/seg_metrics.hpp"

namespace fs = std::filesystem;
using namespace fundusquant;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitManifest = 2;
constexpr int kExitConfig = 3;

Config resolve_config(const std::string& flag) {
    if (!flag.empty()) return Config::load(flag);
    if (const char* env = std::getenv("FUNDUSQUANT_CONFIG"); env && *env) return Config::load(env);
    return Config{};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::EncodeError, "cannot write " + path.string());
}

std::string status_of(const MetricResult& r) { return r.ok() ? "ok" : "undefined(" + r.reason + ")"; }

std::string number_text(double v) { return ordered_json(v).dump(); }

struct QuantifyArgs {
    std::string manifest, config, out;
    int workers = 1;
    bool overlays = false;
};

int run_quantify(const QuantifyArgs& a) {
    const Config cfg = resolve_config(a.config);
    const Manifest m = load_manifest(a.manifest);
    const BatchResult result = run_batch(m, cfg, a.workers);
    write_batch(result, a.out);
    if (a.overlays) {
        std::map<std::string, const BiomarkerReport*> by_id;
        for (const auto& r : result.reports) by_id[r.image_id] = &r;
        for (const auto& e : m.images) {
            auto it = by_id.find(e.image_id);
            if (it == by_id.end()) continue;
            const QuantifyInputs in = load_inputs(e, cfg);
            write_rgb_png(fs::path(a.out) / (e.image_id + "_overlay.png"), render_overlay(in, *it->second, cfg));
        }
    }
    std::cout << "quantified " << result.reports.size() << " image(s), " << result.failures.size() << " failure(s)\n";
    for (const auto& f : result.failures) std::cerr << f.image_id << ": " << f.message << "\n";
    return kExitOk;
}

struct MetricsArgs {
    std::string pairs, out;
    bool micro = false;
    std::vector<std::string> metrics{"dsc", "jaccard", "precision", "hd95", "cldice"};
};

int run_metrics(const MetricsArgs& a) {
    const auto pairs = load_pairs(a.pairs);
    std::string csv = "dataset,image_id,class,metric,value,status\n";
    struct Group {
        std::map<std::string, std::vector<MetricResult>> per_metric;
        MicroAccumulator micro;
    };
    std::map<std::pair<std::string, std::string>, Group> groups;
    for (const auto& p : pairs) {
        const std::string prefix = p.dataset + "," + p.image_id + "," + p.class_name + ",";
        Group& g = groups[{p.dataset, p.class_name}];
        std::optional<BinaryMask> pred, gt;
        std::string failure;
        try {
            pred = read_mask_png(p.pred);
            gt = read_mask_png(p.gt);
            require_same_shape(*pred, *gt);
        } catch (const Error& e) {
            failure = std::string(code_name(e.code()));
            std::cerr << p.image_id << ": " << e.what() << "\n";
        }
        for (const auto& name : a.metrics) {
            MetricResult r = failure.empty() ? compute_metric(name, *pred, *gt, p.um_per_px.value_or(1.0))
                                             : MetricResult::undefined(name, failure);
            csv += prefix + name + "," + (r.ok() ? number_text(*r.value) : "") + "," + status_of(r) + "\n";
            g.per_metric[name].push_back(std::move(r));
        }
        if (failure.empty() && a.micro) g.micro.add(*pred, *gt);
    }
    for (const auto& [key, g] : groups) {
        const std::string prefix = key.first + ",__macro__," + key.second + ",";
        for (const auto& name : a.metrics) {
            try {
                const MetricSummary s = aggregate(g.per_metric.at(name));
                csv += prefix + name + "," + number_text(s.mean) + ",ok\n";
            } catch (const Error& e) {
                csv += prefix + name + ",,undefined(" + std::string(code_name(e.code())) + ")\n";
            }
        }
        if (!a.micro) continue;
        const std::string micro_prefix = key.first + ",__micro__," + key.second + ",";
        for (const auto& name : a.metrics) {
            if (name == "hd95") continue;
            const MetricResult r = g.micro.result(name);
            csv += micro_prefix + name + "," + (r.ok() ? number_text(*r.value) : "") + "," + status_of(r) + "\n";
        }
    }
    const fs::path out(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_text(out, csv);
    std::cout << "evaluated " << pairs.size() << " pair(s)\n";
    return kExitOk;
}

struct CurateArgs {
    std::string manifest, config, out;
    std::optional<double> threshold;
};

int run_curate(const CurateArgs& a) {
    Config cfg = resolve_config(a.config);
    if (a.threshold) {
        if (!(*a.threshold > 0.0 && *a.threshold < 1.0)) throw Error(ErrorCode::BadThreshold, "--threshold must lie in (0, 1)");
        cfg.curation.threshold = *a.threshold;
    }
    const Manifest m = load_manifest(a.manifest);
    const Registry& reg = Registry::builtin();
    fs::create_directories(a.out);

    ordered_json records = ordered_json::array();
    std::size_t accepted = 0, rejected = 0;
    std::vector<const ImageManifestEntry*> entries;
    for (const auto& e : m.images) entries.push_back(&e);
    std::sort(entries.begin(), entries.end(), [](auto* x, auto* y) { return x->image_id < y->image_id; });
    for (const auto* e : entries) {
        for (const auto& [name, path] : e->prob_maps) {
            ordered_json rec;
            rec["image_id"] = e->image_id;
            rec["class"] = name;
            rec["threshold"] = cfg.curation.threshold;
            try {
                const TargetClass& c = reg.parse_class(name);
                const BinaryMask mask = threshold_probmap(read_prob_png(path), cfg.curation.threshold);
                bool ok = true;
                rec["topology_filtered"] = c.topological;
                if (c.topological) {
                    const CurationVerdict v = topology_filter(mask, cfg.curation);
                    ok = v.accepted;
                    ordered_json reasons = ordered_json::array();
                    for (const auto& r : v.reasons) {
                        reasons.push_back({{"rule", r.rule}, {"measured", r.measured}, {"threshold", r.threshold}, {"violated", r.violated}});
                    }
                    rec["reasons"] = reasons;
                    rec["stats"] = {{"n_components", v.stats.n_components},
                                    {"n_fragments", v.stats.n_fragments},
                                    {"largest_component_frac", v.stats.largest_component_frac},
                                    {"n_spurs", v.stats.n_spurs},
                                    {"spur_len_threshold", v.stats.spur_len_threshold}};
                }
                rec["foreground_px"] = mask.count();
                rec["accepted"] = ok;
                if (ok) {
                    const std::string file = e->image_id + "_" + class_key(c) + ".png";
                    write_mask_png(fs::path(a.out) / file, mask);
                    rec["mask"] = file;
                    ++accepted;
                } else {
                    ++rejected;
                }
            } catch (const Error& ex) {
                if (ex.code() == ErrorCode::BadThreshold) throw;
                rec["accepted"] = false;
                rec["error"] = {{"code", std::string(code_name(ex.code()))}, {"message", ex.what()}};
                ++rejected;
            }
            records.push_back(std::move(rec));
        }
    }
    ordered_json doc;
    doc["schema"] = "fundusquant.verdicts/1";
    doc["config_fingerprint"] = cfg.fingerprint();
    doc["records"] = records;
    write_text(fs::path(a.out) / "verdicts.json", doc.dump(2) + "\n");
    std::cout << "accepted " << accepted << ", rejected " << rejected << "\n";
    return kExitOk;
}

struct OverlayArgs {
    std::string manifest, config, reports, out;
};

int run_overlay(const OverlayArgs& a) {
    const Config cfg = resolve_config(a.config);
    const Manifest m = load_manifest(a.manifest);
    fs::create_directories(a.out);
    int failures = 0;
    for (const auto& e : m.images) {
        try {
            std::ifstream in(fs::path(a.reports) / (e.image_id + ".json"), std::ios::binary);
            if (!in) throw Error(ErrorCode::DecodeError, "no report for " + e.image_id);
            const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            const BiomarkerReport report = parse_report(text);
            write_rgb_png(fs::path(a.out) / (e.image_id + "_overlay.png"), render_overlay(load_inputs(e, cfg), report, cfg));
        } catch (const Error& ex) {
            std::cerr << e.image_id << ": " << ex.what() << "\n";
            ++failures;
        }
    }
    std::cout << "rendered " << m.images.size() - static_cast<std::size_t>(failures) << " overlay(s)\n";
    return kExitOk;
}

struct PhantomArgs {
    std::string out;
    int count = 1;
    int size = 512;
    unsigned seed = 1;
    bool overrides = false;
};

int run_phantom(const PhantomArgs& a) {
    Manifest m;
    for (int i = 0; i < a.count; ++i) {
        PhantomOptions opt;
        opt.size = a.size;
        opt.seed = a.seed + static_cast<unsigned>(i);
        opt.eye = i % 2 ? Laterality::OS : Laterality::OD;
        char id[32];
        std::snprintf(id, sizeof id, "phantom_%03d", i);
        m.images.push_back(write_phantom(make_phantom(opt), a.out, id, a.overrides));
    }
    write_text(fs::path(a.out) / "manifest.json", to_json(m).dump(2) + "\n");
    std::cout << "wrote " << a.count << " phantom(s) to " << a.out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Retinal biomarker quantification from segmentation masks"};
    app.set_version_flag("--version", std::string(kArtifactVersion));
    app.require_subcommand(1);

    QuantifyArgs qa;
    auto* quantify = app.add_subcommand("quantify", "Compute biomarker reports for a manifest");
    quantify->add_option("--manifest", qa.manifest, "Image manifest (JSON or CSV)")->required();
    quantify->add_option("--config", qa.config, "Config JSON (falls back to $FUNDUSQUANT_CONFIG)");
    quantify->add_option("--out", qa.out, "Output directory")->required();
    quantify->add_option("--workers", qa.workers, "Worker threads")->check(CLI::PositiveNumber);
    quantify->add_flag("--overlays", qa.overlays, "Also render overlays");

    MetricsArgs ma;
    auto* metrics = app.add_subcommand("metrics", "Evaluate prediction/ground-truth pairs");
    metrics->add_option("--pairs", ma.pairs, "Pairs manifest")->required();
    metrics->add_option("--out", ma.out, "Output CSV")->required();
    metrics->add_flag("--micro", ma.micro, "Add micro-averaged rows");
    metrics->add_option("--metrics", ma.metrics, "Subset of dsc, jaccard, precision, hd95, cldice")
        ->check(CLI::IsMember({"dsc", "jaccard", "precision", "hd95", "cldice"}));

    CurateArgs ca;
    double threshold = 0.0;
    auto* curate = app.add_subcommand("curate", "Threshold probability maps and filter topology");
    curate->add_option("--manifest", ca.manifest, "Manifest with prob_maps")->required();
    curate->add_option("--config", ca.config, "Config JSON (falls back to $FUNDUSQUANT_CONFIG)");
    auto* thr = curate->add_option("--threshold", threshold, "Confidence threshold (strict >)");
    curate->add_option("--out", ca.out, "Output directory")->required();

    OverlayArgs oa;
    auto* overlay = app.add_subcommand("overlay", "Render overlays from existing reports");
    overlay->add_option("--manifest", oa.manifest, "Image manifest")->required();
    overlay->add_option("--reports", oa.reports, "Directory of <image_id>.json reports")->required();
    overlay->add_option("--config", oa.config, "Config JSON (falls back to $FUNDUSQUANT_CONFIG)");
    overlay->add_option("--out", oa.out, "Output directory")->required();

    PhantomArgs pa;
    auto* phantom = app.add_subcommand("phantom", "Write synthetic test images and a manifest");
    phantom->add_option("--out", pa.out, "Output directory")->required();
    phantom->add_option("--count", pa.count, "Number of images")->check(CLI::Range(1, 10000));
    phantom->add_option("--size", pa.size, "Image side in pixels")->check(CLI::Range(64, 8192));
    phantom->add_option("--seed", pa.seed, "First seed");
    phantom->add_flag("--with-overrides", pa.overrides, "Record fovea and laterality in the manifest");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*quantify) return run_quantify(qa);
        if (*metrics) return run_metrics(ma);
        if (*curate) {
            if (*thr) ca.threshold = threshold;
            return run_curate(ca);
        }
        if (*overlay) return run_overlay(oa);
        if (*phantom) return run_phantom(pa);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::ManifestError: return kExitManifest;
            case ErrorCode::ConfigError:
            case ErrorCode::BadThreshold:
            case ErrorCode::BadBins: return kExitConfig;
            default: return kExitFailure;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}
