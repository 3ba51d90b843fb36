#pragma once

#include <string>
#include <vector>

#include "fundusquant/config.hpp"
#include "fundusquant/raster.hpp"

namespace fundusquant {

/// Foreground where p > t (strict). Throws BadThreshold unless 0 < t < 1.
BinaryMask threshold_probmap(const ProbMap& p, double t = 0.75);

struct CurationRule {
    std::string rule;  // disconnection, fragmentation or spurs
    double measured = 0.0;
    double threshold = 0.0;
    bool violated = false;
};

struct CurationStats {
    std::size_t n_components = 0;
    std::size_t n_fragments = 0;  // components of at least the minimum fragment area
    double largest_component_frac = 0.0;
    std::size_t n_spurs = 0;
    double spur_len_threshold = 0.0;
};

struct CurationVerdict {
    bool accepted = true;
    /// Every evaluated rule, in a fixed order.
    std::vector<CurationRule> reasons;
    CurationStats stats;

    std::vector<std::string> violated_rules() const;
};

/// An empty mask is accepted with all measurements at zero.
CurationVerdict topology_filter(const BinaryMask& m, const CurationConfig& cfg = {});

}  // namespace fundusquant
