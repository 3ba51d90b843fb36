#include "fundusquant/curation.hpp"

#include <algorithm>

#include "fundusquant/components.hpp"
#include "fundusquant/distance.hpp"
#include "fundusquant/skeleton.hpp"

namespace fundusquant {

BinaryMask threshold_probmap(const ProbMap& p, double t) {
    if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::BadThreshold, "threshold must lie in (0, 1)");
    BinaryMask m(p.width(), p.height());
    const auto src = p.data();
    auto dst = m.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > t ? 1 : 0;
    return m;
}

std::vector<std::string> CurationVerdict::violated_rules() const {
    std::vector<std::string> out;
    for (const auto& r : reasons) {
        if (r.violated) out.push_back(r.rule);
    }
    return out;
}

CurationVerdict topology_filter(const BinaryMask& m, const CurationConfig& cfg) {
    CurationVerdict v;
    v.stats.spur_len_threshold = cfg.spur_length_px;

    const ComponentSet comps = connected_components(m, Connectivity::Eight);
    v.stats.n_components = comps.size();
    std::size_t total = 0, largest = 0;
    for (const auto& c : comps) {
        total += c.area;
        largest = std::max(largest, c.area);
        if (c.area >= static_cast<std::size_t>(cfg.min_fragment_area)) ++v.stats.n_fragments;
    }
    v.stats.largest_component_frac = total ? static_cast<double>(largest) / static_cast<double>(total) : 0.0;

    if (total > 0) {
        const SkeletonGraph g = skeleton_graph(skeletonize(m), distance_transform(m));
        for (const auto& b : g.branches) {
            if (!b.closed_loop && b.arc_length < cfg.spur_length_px && b.ends_at_endpoint(g.nodes)) ++v.stats.n_spurs;
        }
    }

    v.reasons.push_back({"disconnection", v.stats.largest_component_frac, cfg.min_largest_fraction,
                         total > 0 && v.stats.largest_component_frac < cfg.min_largest_fraction});
    v.reasons.push_back({"fragmentation", static_cast<double>(v.stats.n_fragments), static_cast<double>(cfg.max_fragments),
                         v.stats.n_fragments > static_cast<std::size_t>(cfg.max_fragments)});
    v.reasons.push_back({"spurs", static_cast<double>(v.stats.n_spurs), static_cast<double>(cfg.max_spurs),
                         v.stats.n_spurs > static_cast<std::size_t>(cfg.max_spurs)});
    v.accepted = std::none_of(v.reasons.begin(), v.reasons.end(), [](const CurationRule& r) { return r.violated; });
    return v;
}

}  // namespace fundusquant
