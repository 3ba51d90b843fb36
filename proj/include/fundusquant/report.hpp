#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fundusquant/config.hpp"
#include "fundusquant/fundus_context.hpp"
#include "fundusquant/manifest.hpp"
#include "fundusquant/raster.hpp"
#include "fundusquant/taxonomy.hpp"

#include "json.hpp"

namespace fundusquant {

inline constexpr const char* kReportSchema = "fundusquant.report/1";
inline constexpr const char* kArtifactVersion = "0.1.0";

/// One report value. Undefined values carry a reason code and no value.
struct Metric {
    using Value = std::variant<std::monostate, std::int64_t, double, bool, std::string>;
    Value value;
    std::string reason;

    bool ok() const noexcept { return reason.empty(); }
    bool operator==(const Metric&) const = default;

    static Metric of(std::int64_t v) { return {v, {}}; }
    static Metric of(std::size_t v) { return {static_cast<std::int64_t>(v), {}}; }
    static Metric of(int v) { return {static_cast<std::int64_t>(v), {}}; }
    static Metric of(double v) { return {v, {}}; }
    static Metric of(bool v) { return {v, {}}; }
    static Metric of(std::string v) { return {std::move(v), {}}; }
    static Metric of(const char* v) { return {std::string(v), {}}; }
    static Metric undefined(std::string why) { return {std::monostate{}, std::move(why)}; }

    /// Numeric view for ok int or double values.
    std::optional<double> number() const;
};

struct ReportField {
    std::string path;  // dotted, e.g. "optic.h_cdr"
    Metric metric;
    bool operator==(const ReportField&) const = default;
};

struct BiomarkerReport {
    std::string schema = kReportSchema;
    std::string artifact_version = kArtifactVersion;
    std::string config_fingerprint;
    std::string image_id;
    /// Schema order.
    std::vector<ReportField> fields;

    bool operator==(const BiomarkerReport&) const = default;
    const Metric* find(std::string_view path) const;
    /// Throws std::out_of_range when the path is absent.
    const Metric& at(std::string_view path) const;
};

/// Metric names of the report schema with lesion classes written as "*"; the distinct count
/// of this list is the number of quantitative metrics the report carries.
std::vector<std::string> metric_catalog();

/// JSON key of a class: canonical name, lower-case, spaces as underscores.
std::string class_key(const TargetClass& c);

/// In-memory inputs to the pipeline.
struct QuantifyInputs {
    std::string image_id;
    /// Supplied masks; an empty mask means "supplied, nothing found".
    std::map<ClassId, BinaryMask> masks;
    std::optional<RealRaster> photo;
    ContextOverrides overrides;
    std::optional<double> um_per_px;
};

/// Decodes every referenced file. Prob maps of classes without a mask are thresholded at
/// cfg.curation.threshold. Throws DecodeError, ManifestError, UnknownClass, ShapeMismatch.
QuantifyInputs load_inputs(const ImageManifestEntry& entry, const Config& cfg, const Registry& reg = Registry::builtin());

/// Runs every module; failures degrade to per-field undefined values. Throws ShapeMismatch
/// when supplied rasters differ in size and ManifestError when no mask is supplied.
BiomarkerReport quantify_masks(const QuantifyInputs& in, const Config& cfg = {}, const Registry& reg = Registry::builtin());
BiomarkerReport quantify_image(const ImageManifestEntry& entry, const Config& cfg = {},
                               const Registry& reg = Registry::builtin());

/// Context as the pipeline builds it: disc = disc ∪ cup, FOV from the photo when present.
FundusContext pipeline_context(const QuantifyInputs& in, const Config& cfg, std::string* fov_source = nullptr);

nlohmann::ordered_json to_json(const BiomarkerReport& r);
/// Throws DecodeError on malformed documents.
BiomarkerReport report_from_json(const nlohmann::ordered_json& j);

/// Two-space indented JSON with a trailing newline.
std::string serialize_report(const BiomarkerReport& r);
BiomarkerReport parse_report(std::string_view text);

/// Same text as the JSON scalar for numbers and booleans; strings unquoted; empty when undefined.
std::string format_value(const Metric& m);

inline constexpr const char* kCsvHeader = "image_id,path,value,status,reason";
/// One row per field, in schema order, without the header.
std::string report_csv_rows(const BiomarkerReport& r);

}  // namespace fundusquant
