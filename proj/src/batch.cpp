#include "fundusquant/batch.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>

namespace fundusquant {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::EncodeError, "cannot write " + path.string());
}

}  // namespace

BatchResult run_batch(const Manifest& manifest, const Config& cfg, int workers, const Registry& reg) {
    std::set<std::string> seen;
    for (const auto& e : manifest.images) {
        if (!seen.insert(e.image_id).second) throw Error(ErrorCode::ManifestError, "duplicate image_id '" + e.image_id + "'");
    }

    const std::size_t n = manifest.images.size();
    std::vector<std::optional<BiomarkerReport>> reports(n);
    std::vector<std::optional<BatchFailure>> failures(n);
    parallel_for(n, workers, [&](std::size_t i) {
        const auto& e = manifest.images[i];
        try {
            reports[i] = quantify_image(e, cfg, reg);
        } catch (const Error& ex) {
            failures[i] = BatchFailure{e.image_id, std::string(code_name(ex.code())), ex.what()};
        } catch (const std::exception& ex) {
            failures[i] = BatchFailure{e.image_id, "InternalError", ex.what()};
        }
    });

    BatchResult r;
    r.config_fingerprint = cfg.fingerprint();
    for (std::size_t i = 0; i < n; ++i) {
        if (reports[i]) r.reports.push_back(std::move(*reports[i]));
        if (failures[i]) r.failures.push_back(std::move(*failures[i]));
    }
    std::sort(r.reports.begin(), r.reports.end(), [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
    std::sort(r.failures.begin(), r.failures.end(), [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
    return r;
}

nlohmann::ordered_json summary_json(const BatchResult& result) {
    nlohmann::ordered_json j;
    j["schema"] = "fundusquant.batch_summary/1";
    j["artifact_version"] = kArtifactVersion;
    j["config_fingerprint"] = result.config_fingerprint;
    j["n_images"] = result.reports.size() + result.failures.size();
    j["n_ok"] = result.reports.size();
    j["n_failed"] = result.failures.size();
    j["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : result.reports) j["reports"].push_back(r.image_id);
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : result.failures) {
        j["failures"].push_back({{"image_id", f.image_id}, {"code", f.code}, {"message", f.message}});
    }
    return j;
}

void write_batch(const BatchResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::string csv = std::string(kCsvHeader) + "\n";
    for (const auto& r : result.reports) {
        write_text(out_dir / (r.image_id + ".json"), serialize_report(r));
        csv += report_csv_rows(r);
    }
    write_text(out_dir / "reports.csv", csv);
    write_text(out_dir / "summary.json", summary_json(result).dump(2) + "\n");
}

}  // namespace fundusquant
