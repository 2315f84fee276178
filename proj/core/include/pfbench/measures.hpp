#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pfbench/ordering.hpp"
#include "pfbench/types.hpp"
#include "pfbench/value_engine.hpp"

namespace pfb {

enum class Measure { mif, lif, mrg, lrg, srg };

std::string measure_name(Measure m);

/// Deletion curve: values[s] is the occluded prediction of class_index after
/// the first s features of pi have been removed.
PFCurve pf_curve(const EvalContext& ctx, const FeatureOrdering& pi,
                 std::size_t class_index, std::string ordering_id = {});

/// Arithmetic mean of the n+1 curve points.
double auc(const PFCurve& curve);

struct MifLif {
    double mif = 0;  // lower better
    double lif = 0;  // higher better
};

using CurveFactory = std::function<PFCurve(const FeatureOrdering&)>;

/// MIF under the descending-phi ordering, LIF under its reverse.
MifLif mif_lif(const AttributionVector& phi, const CurveFactory& curve_factory);

struct RelevanceGains {
    double mrg = 0;
    double lrg = 0;
    double srg = 0;
};

/// mrg = r_oms_bar - mif, lrg = lif - r_oms_bar, srg = lif - mif.
RelevanceGains relevance_gains(double mif, double lif, double r_oms_bar);

/// Mean over unordered curve pairs of the mean absolute pointwise difference.
double curve_spread(const std::vector<PFCurve>& curves);

/// Population variance of one measure across setups (records of one method).
double cross_setup_variance(const std::vector<MeasureRecord>& records,
                            Measure measure);

double measure_of(const MeasureRecord& record, Measure measure);

/// Everything produced for one grid point.
struct SetupResult {
    ExperimentSetup setup;
    double r_oms_bar = 0;
    double nr_oms_bar = 0;
    std::vector<MeasureRecord> records;
    std::map<std::string, PFCurve> mif_curves;  // method -> mean curve
    std::map<std::string, PFCurve> lif_curves;
};

}  // namespace pfb
