#include "pfbench/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pfbench/errors.hpp"

namespace pfb {

void FeatureOrdering::validate() const {
    std::vector<bool> seen(order.size(), false);
    for (auto i : order) {
        if (i >= order.size() || seen[i])
            throw ValidationError("ordering is not a permutation");
        seen[i] = true;
    }
}

void AttributionVector::validate() const {
    for (double v : phi)
        if (!std::isfinite(v))
            throw ValidationError("attribution contains non-finite entry");
}

void PFCurve::validate() const {
    if (values.empty()) throw ValidationError("curve must have n+1 entries");
    for (double v : values)
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw ValidationError("curve values must be probabilities");
}

FeatureOrdering ordering_from_attribution(const AttributionVector& phi) {
    phi.validate();
    FeatureOrdering pi;
    pi.order.resize(phi.n());
    std::iota(pi.order.begin(), pi.order.end(), std::size_t{0});
    std::sort(pi.order.begin(), pi.order.end(),
              [&](std::size_t a, std::size_t b) {
                  if (phi.phi[a] != phi.phi[b]) return phi.phi[a] > phi.phi[b];
                  return a < b;
              });
    return pi;
}

FeatureOrdering reverse_ordering(const FeatureOrdering& pi) {
    FeatureOrdering r;
    r.order.assign(pi.order.rbegin(), pi.order.rend());
    return r;
}

Coalition leading_set(const FeatureOrdering& pi, std::size_t s) {
    if (s > pi.n()) throw ValidationError("leading_set: s out of range");
    Coalition c(pi.n());
    for (std::size_t i = 0; i < s; ++i) c.insert(pi.order[i]);
    return c;
}

}  // namespace pfb
