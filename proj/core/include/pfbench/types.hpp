#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace pfb {

/// One point of the design-choice grid.
struct ExperimentSetup {
    std::string setup_id;
    std::string imputer_id;
    std::string segmenter_id;
    std::size_t n_superpixels = 0;
    std::string predictor_id;
    std::size_t imputer_samples = 1;     // K
    std::size_t baseline_orderings = 20; // R
    std::uint64_t master_seed = 0;

    void validate() const;
};

/// The measure family for one (setup, method) pair.
struct MeasureRecord {
    std::string setup_id;
    std::string method_id;
    double mif = 0;
    double lif = 0;
    double mrg = 0;
    double lrg = 0;
    double srg = 0;
    double r_oms_bar = 0;

    /// Checks the arithmetic identities srg = lif - mif, mrg = r_oms_bar - mif,
    /// lrg = lif - r_oms_bar (all within 1e-12).
    void validate() const;
};

}  // namespace pfb
