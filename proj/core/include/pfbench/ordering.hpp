#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pfbench/coalition.hpp"

namespace pfb {

/// Permutation of {0,...,n-1}; order[0] is flipped first.
struct FeatureOrdering {
    std::vector<std::size_t> order;

    std::size_t n() const { return order.size(); }
    void validate() const;
};

/// One attribution score per superpixel for a single (method, setup).
struct AttributionVector {
    std::vector<double> phi;
    std::string method_id;
    std::string setup_id;

    std::size_t n() const { return phi.size(); }
    void validate() const;
};

/// Occluded predictions along an ordering; values[s] is the prediction after
/// removing the first s features. Always n+1 entries in [0,1].
struct PFCurve {
    std::vector<double> values;
    std::string ordering_id;

    std::size_t n() const { return values.empty() ? 0 : values.size() - 1; }
    void validate() const;
};

/// Indices sorted by descending phi; ties broken by ascending index.
FeatureOrdering ordering_from_attribution(const AttributionVector& phi);

/// Same ordering walked back to front.
FeatureOrdering reverse_ordering(const FeatureOrdering& pi);

/// The first s features of pi as a coalition.
Coalition leading_set(const FeatureOrdering& pi, std::size_t s);

}  // namespace pfb
