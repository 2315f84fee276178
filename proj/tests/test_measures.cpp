#include <doctest.h>

#include "pfbench/errors.hpp"
#include "pfbench/measures.hpp"
#include "pfbench/synthetic.hpp"

using namespace pfb;

namespace {

// Equal-size 4-feature grid over a 16x16 image with a linear
// occlusion-fraction predictor: curve values are exactly the kept fraction.
struct Fixture {
    SyntheticInstance inst;
    std::shared_ptr<Predictor> predictor;
    ImputerDescriptor imputer = make_mean_imputer({0.5f, 0.5f, 0.5f});

    Fixture() {
        inst = make_additive_instance(31, 4, 16, 16);
        predictor = std::make_shared<OcclusionFractionPredictor>(
            inst.anchor_color, ResponseCurve{});
    }

    EvalContext ctx() {
        return EvalContext{*predictor, inst.image, inst.mask, imputer,
                           1,          3,          inst.image_id, nullptr};
    }
};

}  // namespace

TEST_CASE("auc is the arithmetic mean of n+1 points") {
    PFCurve curve;
    curve.values = {1.0, 0.5, 0.25, 0.0};
    CHECK(auc(curve) == doctest::Approx(0.4375).epsilon(1e-15));
}

TEST_CASE("pf curve walks the ordering on an exact predictor") {
    Fixture f;
    auto ctx = f.ctx();
    PFCurve curve = pf_curve(ctx, FeatureOrdering{{0, 1, 2, 3}}, 0);
    REQUIRE(curve.values.size() == 5);
    for (std::size_t s = 0; s <= 4; ++s)
        CHECK(curve.values[s] ==
              doctest::Approx(1.0 - 0.25 * static_cast<double>(s))
                  .epsilon(1e-12));
    CHECK(auc(curve) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mif uses descending phi and lif its reverse") {
    Fixture f;
    auto ctx = f.ctx();
    AttributionVector phi;
    phi.phi = {0.1, 0.4, 0.3, 0.2};
    auto factory = [&](const FeatureOrdering& pi) {
        return pf_curve(ctx, pi, 0);
    };
    MifLif ml = mif_lif(phi, factory);
    // Equal-size features under a linear response: every ordering gives the
    // same curve, so MIF == LIF == 0.5.
    CHECK(ml.mif == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ml.lif == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("relevance gains identities") {
    RelevanceGains g = relevance_gains(0.2, 0.7, 0.45);
    CHECK(g.srg == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.mrg == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.lrg == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.srg == doctest::Approx(g.mrg + g.lrg).epsilon(1e-15));
}

TEST_CASE("curve spread hand oracle") {
    PFCurve a, b, c;
    a.values = {1.0, 0.0};
    b.values = {0.0, 1.0};
    c.values = {1.0, 1.0};
    // Pairwise mean absolute differences: (a,b)=1, (a,c)=0.5, (b,c)=0.5.
    CHECK(curve_spread({a, b, c}) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(curve_spread({a}), ValidationError);
}

TEST_CASE("cross-setup variance is the population variance") {
    std::vector<MeasureRecord> records(3);
    records[0].srg = 1.0;
    records[1].srg = 2.0;
    records[2].srg = 3.0;
    CHECK(cross_setup_variance(records, Measure::srg) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("measure names round-trip") {
    CHECK(measure_name(Measure::mif) == "mif");
    CHECK(measure_name(Measure::srg) == "srg");
}
