#include "fundusquant/seg_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fundusquant/components.hpp"
#include "fundusquant/distance.hpp"
#include "fundusquant/skeleton.hpp"

namespace fundusquant {

namespace {

struct Counts {
    std::size_t inter = 0, pred = 0, gt = 0;
};

Counts count_pair(const BinaryMask& p, const BinaryMask& g) {
    require_same_shape(p, g);
    Counts c;
    const auto pd = p.data();
    const auto gd = g.data();
    for (std::size_t i = 0; i < pd.size(); ++i) {
        const bool a = pd[i] != 0, b = gd[i] != 0;
        c.pred += a;
        c.gt += b;
        c.inter += a && b;
    }
    return c;
}

double ratio(std::size_t num, std::size_t den) { return static_cast<double>(num) / static_cast<double>(den); }

MetricResult dsc_from(const Counts& c) {
    if (c.pred + c.gt == 0) return MetricResult::defined("dsc", 1.0);
    return MetricResult::defined("dsc", ratio(2 * c.inter, c.pred + c.gt));
}

MetricResult jaccard_from(const Counts& c) {
    const std::size_t uni = c.pred + c.gt - c.inter;
    if (uni == 0) return MetricResult::defined("jaccard", 1.0);
    return MetricResult::defined("jaccard", ratio(c.inter, uni));
}

MetricResult precision_from(const Counts& c) {
    if (c.pred == 0) return MetricResult::undefined("precision", "NoPositives");
    return MetricResult::defined("precision", ratio(c.inter, c.pred));
}

MetricResult cldice_from(std::size_t sp_in_g, std::size_t sp, std::size_t sg_in_p, std::size_t sg) {
    if (sp == 0 || sg == 0) return MetricResult::undefined("cldice", "EmptySkeleton");
    const double tprec = ratio(sp_in_g, sp);
    const double tsens = ratio(sg_in_p, sg);
    if (tprec + tsens == 0.0) return MetricResult::defined("cldice", 0.0);
    return MetricResult::defined("cldice", 2.0 * tprec * tsens / (tprec + tsens));
}

// Squared distances from each boundary pixel of `from` to the nearest boundary pixel of `to`.
void directed(const std::vector<Pixel>& from, const BinaryMask& to_boundary, std::vector<double>& out) {
    const Grid<std::int64_t> d2 = squared_distance_to_sites(to_boundary, false);
    for (const auto& p : from) out.push_back(std::sqrt(static_cast<double>(d2(p.x, p.y))));
}

}  // namespace

MetricResult dsc(const BinaryMask& pred, const BinaryMask& gt) { return dsc_from(count_pair(pred, gt)); }
MetricResult jaccard(const BinaryMask& pred, const BinaryMask& gt) { return jaccard_from(count_pair(pred, gt)); }
MetricResult precision(const BinaryMask& pred, const BinaryMask& gt) { return precision_from(count_pair(pred, gt)); }

MetricResult hd95(const BinaryMask& pred, const BinaryMask& gt, double scale) {
    require_same_shape(pred, gt);
    const bool pe = pred.empty(), ge = gt.empty();
    if (pe && ge) return MetricResult::defined("hd95", 0.0);
    if (pe || ge) return MetricResult::undefined("hd95", "EmptyMask");
    const BinaryMask bp = boundary_mask(pred);
    const BinaryMask bg = boundary_mask(gt);
    std::vector<double> d;
    directed(bp.pixels(), bg, d);
    directed(bg.pixels(), bp, d);
    std::sort(d.begin(), d.end());
    const double rank = 0.95 * static_cast<double>(d.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, d.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return MetricResult::defined("hd95", scale * (d[lo] + frac * (d[hi] - d[lo])));
}

MetricResult cldice(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_shape(pred, gt);
    const BinaryMask sp = skeletonize(pred);
    const BinaryMask sg = skeletonize(gt);
    return cldice_from((sp & gt).count(), sp.count(), (sg & pred).count(), sg.count());
}

MetricResult compute_metric(std::string_view name, const BinaryMask& pred, const BinaryMask& gt, double scale) {
    if (name == "dsc") return dsc(pred, gt);
    if (name == "jaccard") return jaccard(pred, gt);
    if (name == "precision") return precision(pred, gt);
    if (name == "hd95") return hd95(pred, gt, scale);
    if (name == "cldice") return cldice(pred, gt);
    throw Error(ErrorCode::ConfigError, "unknown metric: " + std::string(name));
}

MetricSummary aggregate(std::span<const MetricResult> results) {
    MetricSummary s;
    if (!results.empty()) s.name = results.front().name;
    double sum = 0.0;
    for (const auto& r : results) {
        if (r.ok()) {
            sum += *r.value;
            ++s.n_ok;
        } else {
            ++s.n_undefined;
        }
    }
    if (s.n_ok == 0) throw Error(ErrorCode::AllUndefined, "no defined result to aggregate");
    s.mean = sum / static_cast<double>(s.n_ok);
    return s;
}

void MicroAccumulator::add(const BinaryMask& pred, const BinaryMask& gt) {
    const Counts c = count_pair(pred, gt);
    inter_ += c.inter;
    pred_ += c.pred;
    gt_ += c.gt;
    const BinaryMask sp = skeletonize(pred);
    const BinaryMask sg = skeletonize(gt);
    skel_pred_in_gt_ += (sp & gt).count();
    skel_pred_ += sp.count();
    skel_gt_in_pred_ += (sg & pred).count();
    skel_gt_ += sg.count();
}

MetricResult MicroAccumulator::result(std::string_view name) const {
    const Counts c{inter_, pred_, gt_};
    if (name == "dsc") return dsc_from(c);
    if (name == "jaccard") return jaccard_from(c);
    if (name == "precision") return precision_from(c);
    if (name == "cldice") return cldice_from(skel_pred_in_gt_, skel_pred_, skel_gt_in_pred_, skel_gt_);
    throw Error(ErrorCode::ConfigError, "metric has no micro average: " + std::string(name));
}

}  // namespace fundusquant
