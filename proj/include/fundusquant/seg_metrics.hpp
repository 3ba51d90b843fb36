#pragma once

#include <optional>
#include <span>
#include <string>

#include "fundusquant/raster.hpp"

namespace fundusquant {

struct MetricResult {
    std::string name;
    std::optional<double> value;  // empty when undefined
    std::string reason;           // set when undefined

    bool ok() const noexcept { return value.has_value(); }
    static MetricResult defined(std::string name, double v) { return {std::move(name), v, {}}; }
    static MetricResult undefined(std::string name, std::string why) { return {std::move(name), std::nullopt, std::move(why)}; }
};

/// 2|P∩G| / (|P|+|G|); 1 when both are empty.
MetricResult dsc(const BinaryMask& pred, const BinaryMask& gt);
/// |P∩G| / |P∪G|; 1 when both are empty.
MetricResult jaccard(const BinaryMask& pred, const BinaryMask& gt);
/// |P∩G| / |P|; undefined(NoPositives) for an empty prediction.
MetricResult precision(const BinaryMask& pred, const BinaryMask& gt);
/// 95th percentile (linear interpolation) of the pooled directed boundary-to-boundary distances,
/// multiplied by `scale`. 0 when both are empty, undefined(EmptyMask) when exactly one is.
MetricResult hd95(const BinaryMask& pred, const BinaryMask& gt, double scale = 1.0);
/// Centreline Dice; undefined(EmptySkeleton) when either skeleton is empty.
MetricResult cldice(const BinaryMask& pred, const BinaryMask& gt);

/// Kernel by name: dsc, jaccard, precision, hd95, cldice. Throws ConfigError for other names.
MetricResult compute_metric(std::string_view name, const BinaryMask& pred, const BinaryMask& gt, double scale = 1.0);

struct MetricSummary {
    std::string name;
    double mean = 0.0;
    std::size_t n_ok = 0;
    std::size_t n_undefined = 0;
};

/// Mean over defined results. Throws AllUndefined when none is defined (or the list is empty).
MetricSummary aggregate(std::span<const MetricResult> results);

/// Pooled pixel counts for micro-averaged dsc, jaccard, precision and cldice.
class MicroAccumulator {
public:
    void add(const BinaryMask& pred, const BinaryMask& gt);
    /// Same conventions as the per-image kernels, applied to the pooled counts.
    MetricResult result(std::string_view name) const;

private:
    std::size_t inter_ = 0, pred_ = 0, gt_ = 0;
    std::size_t skel_pred_in_gt_ = 0, skel_pred_ = 0, skel_gt_in_pred_ = 0, skel_gt_ = 0;
};

}  // namespace fundusquant
