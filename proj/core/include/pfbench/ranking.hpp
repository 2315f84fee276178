#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pfbench/measures.hpp"

namespace pfb {

/// Ordered method ids, best first, for one setup and one measure.
struct Ranking {
    std::string setup_id;
    std::vector<std::string> methods;
    Measure measure = Measure::srg;
};

/// Sorts methods by the measure (MIF ascending, everything else descending);
/// ties broken lexicographically by method id.
Ranking extract_ranking(const std::vector<MeasureRecord>& records,
                        Measure measure);

/// Modal ranking; equally frequent rankings tie-break lexicographically.
Ranking most_frequent_ranking(const std::vector<Ranking>& rankings);

/// Gain per reference position (0-based); default is linear relevance
/// k - position.
using GainFunction = std::function<double(std::size_t k, std::size_t ref_pos)>;

double ndcg(const Ranking& ranking, const Ranking& reference,
            const GainFunction& gain = {});

/// Two-pass Pearson correlation.
double pearson(std::span<const double> x, std::span<const double> y);

enum class SortVariable {
    n_superpixels,
    imputer,
    model,
    r_oms_bar,
    nr_oms_bar,
    random
};

struct SortConsistency {
    double correlation = 0;  // for random: mean over draws
    double sigma = 0;        // only for random
};

/// Correlation between a setup variable and per-setup nDCG (vs the most
/// frequent ranking under ranking_measure). Categorical variables probe all
/// level orderings (<= 6 levels) and report the maximum; random reports
/// mean and sigma over random numeric assignments.
SortConsistency sort_consistency(const std::vector<SetupResult>& setups,
                                 SortVariable variable, Measure ranking_measure,
                                 std::size_t random_draws = 1000,
                                 std::uint64_t seed = 0);

/// Pearson correlation between per-setup curve spread (in the measure's
/// direction) and the setup's random baseline.
double spread_correlation(const std::vector<SetupResult>& setups,
                          Measure measure);

std::size_t distinct_ranking_count(const std::vector<Ranking>& rankings);

struct ConsistencyReport {
    Ranking reference;
    std::vector<double> per_setup_ndcg;       // aligned with input setups
    std::size_t distinct_rankings = 0;
    std::vector<std::pair<std::string, SortConsistency>> variable_scores;
};

ConsistencyReport consistency_report(const std::vector<SetupResult>& setups,
                                     Measure ranking_measure,
                                     std::size_t random_draws = 1000,
                                     std::uint64_t seed = 0);

}  // namespace pfb
