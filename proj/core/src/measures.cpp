#include "pfbench/measures.hpp"

#include <cmath>

#include "pfbench/errors.hpp"

namespace pfb {

std::string measure_name(Measure m) {
    switch (m) {
        case Measure::mif: return "mif";
        case Measure::lif: return "lif";
        case Measure::mrg: return "mrg";
        case Measure::lrg: return "lrg";
        case Measure::srg: return "srg";
    }
    return "?";
}

PFCurve pf_curve(const EvalContext& ctx, const FeatureOrdering& pi,
                 std::size_t class_index, std::string ordering_id) {
    pi.validate();
    const std::size_t n = ctx.mask.n();
    if (pi.n() != n) throw ValidationError("ordering size does not match mask");

    PFCurve curve;
    curve.ordering_id = std::move(ordering_id);
    curve.values.reserve(n + 1);
    Coalition present = Coalition::full(n);
    curve.values.push_back(r_oms(ctx, present, class_index));
    for (std::size_t s = 0; s < n; ++s) {
        present.erase(pi.order[s]);
        curve.values.push_back(r_oms(ctx, present, class_index));
    }
    return curve;
}

double auc(const PFCurve& curve) {
    curve.validate();
    double sum = 0;
    for (double v : curve.values) sum += v;
    return sum / static_cast<double>(curve.values.size());
}

MifLif mif_lif(const AttributionVector& phi, const CurveFactory& curve_factory) {
    FeatureOrdering pi = ordering_from_attribution(phi);
    MifLif out;
    out.mif = auc(curve_factory(pi));
    out.lif = auc(curve_factory(reverse_ordering(pi)));
    return out;
}

RelevanceGains relevance_gains(double mif, double lif, double r_oms_bar) {
    RelevanceGains g;
    g.mrg = r_oms_bar - mif;
    g.lrg = lif - r_oms_bar;
    g.srg = lif - mif;
    return g;
}

double curve_spread(const std::vector<PFCurve>& curves) {
    if (curves.size() < 2)
        throw ValidationError("curve_spread needs at least two curves");
    const std::size_t len = curves[0].values.size();
    for (const auto& c : curves)
        if (c.values.size() != len)
            throw ValidationError("curves have different lengths");

    double total = 0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < curves.size(); ++a) {
        for (std::size_t b = a + 1; b < curves.size(); ++b) {
            double d = 0;
            for (std::size_t s = 0; s < len; ++s)
                d += std::fabs(curves[a].values[s] - curves[b].values[s]);
            total += d / static_cast<double>(len);
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

double measure_of(const MeasureRecord& record, Measure measure) {
    switch (measure) {
        case Measure::mif: return record.mif;
        case Measure::lif: return record.lif;
        case Measure::mrg: return record.mrg;
        case Measure::lrg: return record.lrg;
        case Measure::srg: return record.srg;
    }
    throw ValidationError("unknown measure");
}

double cross_setup_variance(const std::vector<MeasureRecord>& records,
                            Measure measure) {
    if (records.size() < 2)
        throw ValidationError("variance needs at least two records");
    double mean = 0;
    for (const auto& r : records) mean += measure_of(r, measure);
    mean /= static_cast<double>(records.size());
    double var = 0;
    for (const auto& r : records) {
        double d = measure_of(r, measure) - mean;
        var += d * d;
    }
    return var / static_cast<double>(records.size());
}

}  // namespace pfb
