#include "pfbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include <json.hpp>

#include "pfbench/errors.hpp"

namespace pfb {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

/// Linear-interpolation quantile on a sorted copy.
double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    double pos = q * static_cast<double>(v.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

void write_rankings_report(const std::filesystem::path& out_dir,
                           const std::vector<SetupResult>& results,
                           Measure measure) {
    if (results.empty()) throw ValidationError("no results to report");
    auto out = open_out(out_dir / "rankings.csv");
    out << "setup_id,measure,rank,method_id,value\n";

    std::vector<Ranking> rankings;
    for (const auto& r : results) {
        Ranking rk = extract_ranking(r.records, measure);
        for (std::size_t pos = 0; pos < rk.methods.size(); ++pos) {
            double value = 0;
            for (const auto& rec : r.records)
                if (rec.method_id == rk.methods[pos])
                    value = measure_of(rec, measure);
            out << rk.setup_id << ',' << measure_name(measure) << ','
                << (pos + 1) << ',' << rk.methods[pos] << ',' << fmt17(value)
                << '\n';
        }
        rankings.push_back(std::move(rk));
    }
    Ranking modal = most_frequent_ranking(rankings);
    for (std::size_t pos = 0; pos < modal.methods.size(); ++pos)
        out << modal.setup_id << ',' << measure_name(measure) << ','
            << (pos + 1) << ',' << modal.methods[pos] << ",\n";
}

void write_consistency_report(const std::filesystem::path& out_dir,
                              const std::vector<SetupResult>& results,
                              Measure measure, std::size_t random_draws,
                              std::uint64_t seed) {
    ConsistencyReport report =
        consistency_report(results, measure, random_draws, seed);

    json j;
    j["measure"] = measure_name(measure);
    j["reference_ranking"] = report.reference.methods;
    j["distinct_rankings"] = report.distinct_rankings;
    j["per_setup_ndcg"] = json::array();
    for (std::size_t i = 0; i < results.size(); ++i)
        j["per_setup_ndcg"].push_back(
            {{"setup_id", results[i].setup.setup_id},
             {"ndcg", report.per_setup_ndcg[i]}});
    j["sort_variables"] = json::array();
    for (const auto& [name, score] : report.variable_scores) {
        json v{{"variable", name}, {"correlation", score.correlation}};
        if (name == "random") v["sigma"] = score.sigma;
        j["sort_variables"].push_back(v);
    }
    open_out(out_dir / "consistency.json") << j.dump(2) << '\n';
}

void write_boxplot_report(const std::filesystem::path& out_dir,
                          const std::vector<SetupResult>& results) {
    if (results.empty()) throw ValidationError("no results to report");
    auto out = open_out(out_dir / "boxplot.csv");
    out << "imputer,measure,method_id,count,min,q1,median,q3,max\n";

    static const Measure measures[] = {Measure::mif, Measure::lif,
                                       Measure::mrg, Measure::lrg,
                                       Measure::srg};
    std::map<std::tuple<std::string, std::string, std::string>,
             std::vector<double>>
        groups;
    for (const auto& r : results)
        for (const auto& rec : r.records)
            for (Measure m : measures)
                groups[{r.setup.imputer_id, measure_name(m), rec.method_id}]
                    .push_back(measure_of(rec, m));

    for (const auto& [key, values] : groups) {
        const auto& [imputer, measure, method] = key;
        out << imputer << ',' << measure << ',' << method << ','
            << values.size() << ',' << fmt17(quantile(values, 0.0)) << ','
            << fmt17(quantile(values, 0.25)) << ','
            << fmt17(quantile(values, 0.5)) << ','
            << fmt17(quantile(values, 0.75)) << ','
            << fmt17(quantile(values, 1.0)) << '\n';
    }
}

void write_matching_report(const std::filesystem::path& out_dir,
                           const std::vector<SetupResult>& results,
                           Measure measure) {
    // Mean measure per (base method, attribution imputer, PF imputer).
    std::map<std::tuple<std::string, std::string, std::string>,
             std::pair<double, std::size_t>>
        cells;
    for (const auto& r : results) {
        for (const auto& rec : r.records) {
            auto open = rec.method_id.find('(');
            auto close = rec.method_id.rfind(')');
            if (open == std::string::npos || close == std::string::npos ||
                close < open)
                continue;
            std::string base = rec.method_id.substr(0, open);
            std::string attr_imputer =
                rec.method_id.substr(open + 1, close - open - 1);
            auto& cell = cells[{base, attr_imputer, r.setup.imputer_id}];
            cell.first += measure_of(rec, measure);
            cell.second += 1;
        }
    }
    if (cells.empty())
        throw ValidationError(
            "matching report needs methods named base(imputer)");

    // Best attribution imputer per (base, PF imputer) column.
    const bool lower_better = (measure == Measure::mif);
    std::map<std::pair<std::string, std::string>, double> best;
    for (const auto& [key, cell] : cells) {
        const auto& [base, attr, pf] = key;
        double mean = cell.first / static_cast<double>(cell.second);
        auto it = best.find({base, pf});
        if (it == best.end())
            best[{base, pf}] = mean;
        else if (lower_better ? mean < it->second : mean > it->second)
            it->second = mean;
    }

    auto out = open_out(out_dir / "matching.csv");
    out << "method,attribution_imputer,pf_imputer,measure,value,"
           "gap_to_best,matched\n";
    for (const auto& [key, cell] : cells) {
        const auto& [base, attr, pf] = key;
        double mean = cell.first / static_cast<double>(cell.second);
        double gap = lower_better ? mean - best[{base, pf}]
                                  : best[{base, pf}] - mean;
        out << base << ',' << attr << ',' << pf << ','
            << measure_name(measure) << ',' << fmt17(mean) << ','
            << fmt17(gap) << ',' << (attr == pf ? 1 : 0) << '\n';
    }
}

}  // namespace pfb
