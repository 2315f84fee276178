#include "pfbench/types.hpp"

#include <cmath>

#include "pfbench/errors.hpp"

namespace pfb {

void ExperimentSetup::validate() const {
    if (n_superpixels < 2)
        throw ValidationError("setup needs at least 2 superpixels");
    if (imputer_samples < 1) throw ValidationError("K must be >= 1");
    if (baseline_orderings < 1) throw ValidationError("R must be >= 1");
}

void MeasureRecord::validate() const {
    if (std::fabs(srg - (lif - mif)) > 1e-12)
        throw ValidationError("srg != lif - mif");
    if (std::fabs(mrg - (r_oms_bar - mif)) > 1e-12)
        throw ValidationError("mrg != r_oms_bar - mif");
    if (std::fabs(lrg - (lif - r_oms_bar)) > 1e-12)
        throw ValidationError("lrg != lif - r_oms_bar");
}

}  // namespace pfb
