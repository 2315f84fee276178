#pragma once

#include <filesystem>
#include <vector>

#include "pfbench/ranking.hpp"

namespace pfb {

/// rankings.csv: per-setup method order under `measure`, plus the most
/// frequent ranking as a pseudo-setup.
void write_rankings_report(const std::filesystem::path& out_dir,
                           const std::vector<SetupResult>& results,
                           Measure measure);

/// consistency.json: reference ranking, per-setup nDCG, distinct ranking
/// count and sort-variable correlations.
void write_consistency_report(const std::filesystem::path& out_dir,
                              const std::vector<SetupResult>& results,
                              Measure measure, std::size_t random_draws = 1000,
                              std::uint64_t seed = 0);

/// boxplot.csv: five-number summary of each measure per (imputer, method)
/// across setups.
void write_boxplot_report(const std::filesystem::path& out_dir,
                          const std::vector<SetupResult>& results);

/// matching.csv: methods named "base(imputer)" cross-tabulated as attribution
/// imputer vs PF-side imputer, with the gap to the best attribution imputer
/// in each column.
void write_matching_report(const std::filesystem::path& out_dir,
                           const std::vector<SetupResult>& results,
                           Measure measure);

}  // namespace pfb
