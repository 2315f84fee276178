#include "pfbench/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "pfbench/errors.hpp"
#include "pfbench/rng.hpp"

namespace pfb {

Ranking extract_ranking(const std::vector<MeasureRecord>& records,
                        Measure measure) {
    if (records.empty()) throw ValidationError("no records to rank");
    std::set<std::string> seen;
    for (const auto& r : records)
        if (!seen.insert(r.method_id).second)
            throw ValidationError("duplicate method in records");

    const bool ascending = (measure == Measure::mif);
    std::vector<const MeasureRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [&](const MeasureRecord* a, const MeasureRecord* b) {
                  double va = measure_of(*a, measure), vb = measure_of(*b, measure);
                  if (va != vb) return ascending ? va < vb : va > vb;
                  return a->method_id < b->method_id;
              });

    Ranking out;
    out.setup_id = records.front().setup_id;
    out.measure = measure;
    for (const auto* r : sorted) out.methods.push_back(r->method_id);
    return out;
}

Ranking most_frequent_ranking(const std::vector<Ranking>& rankings) {
    if (rankings.empty()) throw ValidationError("no rankings given");
    std::set<std::string> method_set(rankings[0].methods.begin(),
                                     rankings[0].methods.end());
    for (const auto& r : rankings) {
        std::set<std::string> s(r.methods.begin(), r.methods.end());
        if (s != method_set)
            throw ValidationError("rankings cover different method sets");
    }

    std::map<std::vector<std::string>, std::size_t> counts;
    for (const auto& r : rankings) ++counts[r.methods];
    // std::map iterates keys lexicographically, so the first maximal entry is
    // the lexicographically smallest among ties.
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
        if (it->second > best->second) best = it;

    Ranking out;
    out.setup_id = "most_frequent";
    out.measure = rankings[0].measure;
    out.methods = best->first;
    return out;
}

double ndcg(const Ranking& ranking, const Ranking& reference,
            const GainFunction& gain) {
    const std::size_t k = reference.methods.size();
    if (ranking.methods.size() != k)
        throw ValidationError("ranking sizes differ");
    std::map<std::string, std::size_t> ref_pos;
    for (std::size_t i = 0; i < k; ++i) ref_pos[reference.methods[i]] = i;
    if (ref_pos.size() != k) throw ValidationError("duplicate reference method");

    GainFunction g = gain;
    if (!g)
        g = [](std::size_t kk, std::size_t pos) {
            return static_cast<double>(kk - pos);
        };

    double dcg = 0, idcg = 0;
    for (std::size_t i = 0; i < k; ++i) {
        auto it = ref_pos.find(ranking.methods[i]);
        if (it == ref_pos.end())
            throw ValidationError("ranking method not in reference");
        const double discount = std::log2(static_cast<double>(i) + 2.0);
        dcg += g(k, it->second) / discount;
        idcg += g(k, i) / discount;
    }
    return dcg / idcg;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("pearson needs two equal-length series");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw ValidationError("pearson undefined for zero-variance input");
    return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> per_setup_ndcg(const std::vector<SetupResult>& setups,
                                   Measure measure, Ranking* reference_out) {
    std::vector<Ranking> rankings;
    rankings.reserve(setups.size());
    for (const auto& s : setups)
        rankings.push_back(extract_ranking(s.records, measure));
    Ranking reference = most_frequent_ranking(rankings);
    std::vector<double> scores;
    scores.reserve(rankings.size());
    for (const auto& r : rankings) scores.push_back(ndcg(r, reference));
    if (reference_out) *reference_out = std::move(reference);
    return scores;
}

double categorical_max_correlation(const std::vector<std::string>& levels_per_setup,
                                   const std::vector<double>& ndcg_scores) {
    std::vector<std::string> levels(levels_per_setup.begin(),
                                    levels_per_setup.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.size() < 2)
        throw ValidationError("categorical variable has a single level");
    if (levels.size() > 6)
        throw ValidationError("categorical probing limited to 6 levels");

    std::vector<std::size_t> rank(levels.size());
    for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
    double best = -1.0;
    do {
        std::vector<double> x(levels_per_setup.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            auto it = std::lower_bound(levels.begin(), levels.end(),
                                       levels_per_setup[i]);
            x[i] = static_cast<double>(
                rank[static_cast<std::size_t>(it - levels.begin())]);
        }
        best = std::max(best, pearson(x, ndcg_scores));
    } while (std::next_permutation(rank.begin(), rank.end()));
    return best;
}

}  // namespace

SortConsistency sort_consistency(const std::vector<SetupResult>& setups,
                                 SortVariable variable, Measure ranking_measure,
                                 std::size_t random_draws, std::uint64_t seed) {
    if (setups.size() < 3)
        throw ValidationError("sort_consistency needs at least 3 setups");
    std::vector<double> scores = per_setup_ndcg(setups, ranking_measure, nullptr);

    SortConsistency out;
    switch (variable) {
        case SortVariable::n_superpixels: {
            std::vector<double> x;
            for (const auto& s : setups)
                x.push_back(static_cast<double>(s.setup.n_superpixels));
            out.correlation = pearson(x, scores);
            break;
        }
        case SortVariable::r_oms_bar: {
            std::vector<double> x;
            for (const auto& s : setups) x.push_back(s.r_oms_bar);
            out.correlation = pearson(x, scores);
            break;
        }
        case SortVariable::nr_oms_bar: {
            std::vector<double> x;
            for (const auto& s : setups) x.push_back(s.nr_oms_bar);
            out.correlation = pearson(x, scores);
            break;
        }
        case SortVariable::imputer: {
            std::vector<std::string> levels;
            for (const auto& s : setups) levels.push_back(s.setup.imputer_id);
            out.correlation = categorical_max_correlation(levels, scores);
            break;
        }
        case SortVariable::model: {
            std::vector<std::string> levels;
            for (const auto& s : setups) levels.push_back(s.setup.predictor_id);
            out.correlation = categorical_max_correlation(levels, scores);
            break;
        }
        case SortVariable::random: {
            StreamRng rng{seed, hash_id("sort-random")};
            double sum = 0, sq = 0;
            for (std::size_t d = 0; d < random_draws; ++d) {
                std::vector<double> x(setups.size());
                for (auto& v : x) v = rng.next_double();
                double c = pearson(x, scores);
                sum += c;
                sq += c * c;
            }
            out.correlation = sum / static_cast<double>(random_draws);
            out.sigma = std::sqrt(std::max(
                0.0, sq / static_cast<double>(random_draws) -
                         out.correlation * out.correlation));
            break;
        }
    }
    return out;
}

double spread_correlation(const std::vector<SetupResult>& setups,
                          Measure measure) {
    if (setups.size() < 3)
        throw ValidationError("spread_correlation needs at least 3 setups");
    if (measure != Measure::mif && measure != Measure::lif)
        throw ValidationError("spread is defined for MIF or LIF curves");

    std::vector<double> spreads, baselines;
    for (const auto& s : setups) {
        const auto& curves_map =
            (measure == Measure::mif) ? s.mif_curves : s.lif_curves;
        std::vector<PFCurve> curves;
        for (const auto& [method, curve] : curves_map) curves.push_back(curve);
        spreads.push_back(curve_spread(curves));
        baselines.push_back(s.r_oms_bar);
    }
    return pearson(spreads, baselines);
}

std::size_t distinct_ranking_count(const std::vector<Ranking>& rankings) {
    std::set<std::vector<std::string>> unique;
    for (const auto& r : rankings) unique.insert(r.methods);
    return unique.size();
}

ConsistencyReport consistency_report(const std::vector<SetupResult>& setups,
                                     Measure ranking_measure,
                                     std::size_t random_draws,
                                     std::uint64_t seed) {
    ConsistencyReport report;
    report.per_setup_ndcg =
        per_setup_ndcg(setups, ranking_measure, &report.reference);

    std::vector<Ranking> rankings;
    for (const auto& s : setups)
        rankings.push_back(extract_ranking(s.records, ranking_measure));
    report.distinct_rankings = distinct_ranking_count(rankings);

    const std::pair<std::string, SortVariable> vars[] = {
        {"n_superpixels", SortVariable::n_superpixels},
        {"imputer", SortVariable::imputer},
        {"model", SortVariable::model},
        {"r_oms_bar", SortVariable::r_oms_bar},
        {"nr_oms_bar", SortVariable::nr_oms_bar},
        {"random", SortVariable::random},
    };
    for (const auto& [name, var] : vars) {
        try {
            report.variable_scores.emplace_back(
                name, sort_consistency(setups, var, ranking_measure,
                                       random_draws, seed));
        } catch (const ValidationError&) {
            // zero-variance or single-level variables are skipped
        }
    }
    return report;
}

}  // namespace pfb
