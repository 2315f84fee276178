#include <doctest.h>

#include <cmath>

#include "pfbench/errors.hpp"
#include "pfbench/predictor.hpp"

using namespace pfb;

TEST_CASE("response curve shapes") {
    ResponseCurve linear;
    CHECK(linear.eval(0.3) == doctest::Approx(0.3));
    CHECK(linear.eval(-1.0) == 0.0);
    CHECK(linear.eval(2.0) == 1.0);

    ResponseCurve power{ResponseCurve::Kind::power, 2.0};
    CHECK(power.eval(0.5) == doctest::Approx(0.25));

    ResponseCurve sat{ResponseCurve::Kind::saturating, 0.5};
    CHECK(sat.eval(0.25) == doctest::Approx(0.5));
    CHECK(sat.eval(0.75) == 1.0);
}

TEST_CASE("occlusion fraction predictor hand oracle") {
    // 2x2 image, one pixel carries the fill color: rho = 1/4.
    ImageTensor img(2, 2, 1, {0.9f, 0.9f, 0.9f, 0.2f});
    OcclusionFractionPredictor pred({0.2f});
    auto pv = pred.predict(img);
    pv.validate();
    CHECK(pv.probs[0] == doctest::Approx(0.75));
    CHECK(pv.probs[1] == doctest::Approx(0.25));

    // Tolerance of 1/255: a value one step away still counts as filled.
    ImageTensor close(2, 2, 1,
                      {0.9f, 0.9f, 0.9f, 0.2f + 0.9f / 255.0f});
    CHECK(pred.predict(close).probs[0] == doctest::Approx(0.75));

    // Spread over >2 classes.
    OcclusionFractionPredictor multi({0.2f}, {}, 5);
    auto mv = multi.predict(img);
    CHECK(mv.probs[0] == doctest::Approx(0.75));
    for (int c = 1; c < 5; ++c)
        CHECK(mv.probs[static_cast<std::size_t>(c)] ==
              doctest::Approx(0.25 / 4.0));
}

TEST_CASE("additive logit predictor hand oracle") {
    // 2 superpixels of 2 pixels each, coefficients 1 and 2.
    ImageTensor ref(2, 2, 1, {0.1f, 0.1f, 0.8f, 0.8f});
    SuperpixelMask mask(2, 2, {0, 0, 1, 1}, 2);
    AdditiveLogitPredictor pred(ref, mask, {1.0, 2.0}, {0.5f});

    // Full match: logit0 = 3, logit1 = 0.
    auto pv = pred.predict(ref);
    double expected = std::exp(3.0) / (std::exp(3.0) + 1.0);
    CHECK(pv.probs[0] == doctest::Approx(expected).epsilon(1e-12));

    // Occlude superpixel 1 (both its pixels changed): logit0 = 1.
    ImageTensor occluded(2, 2, 1, {0.1f, 0.1f, 0.5f, 0.5f});
    auto pv2 = pred.predict(occluded);
    double expected2 = std::exp(1.0) / (std::exp(1.0) + 1.0);
    CHECK(pv2.probs[0] == doctest::Approx(expected2).epsilon(1e-12));

    // Half of superpixel 0 changed: logit0 = 0.5 + 2 = 2.5.
    ImageTensor half(2, 2, 1, {0.1f, 0.5f, 0.8f, 0.8f});
    auto frac = pred.match_fractions(half);
    CHECK(frac[0] == doctest::Approx(0.5));
    CHECK(frac[1] == doctest::Approx(1.0));
}

TEST_CASE("additive predictor is exactly additive in match fractions") {
    ImageTensor ref(4, 1, 1, {0.1f, 0.3f, 0.6f, 0.9f});
    SuperpixelMask mask(4, 1, {0, 1, 2, 3}, 4);
    AdditiveLogitPredictor pred(ref, mask, {0.7, 1.1, 1.9, 2.3}, {0.5f});

    // Occluding feature sets {1} and {3} changes the logit by exactly the
    // corresponding coefficients.
    ImageTensor o1(4, 1, 1, {0.1f, 0.5f, 0.6f, 0.9f});
    ImageTensor o3(4, 1, 1, {0.1f, 0.3f, 0.6f, 0.5f});
    ImageTensor o13(4, 1, 1, {0.1f, 0.5f, 0.6f, 0.5f});
    auto logit = [](const ProbabilityVector& pv) {
        return std::log(pv.probs[0] / pv.probs[1]);
    };
    double full = logit(pred.predict(ref));
    CHECK(full - logit(pred.predict(o1)) == doctest::Approx(1.1).epsilon(1e-9));
    CHECK(full - logit(pred.predict(o3)) == doctest::Approx(2.3).epsilon(1e-9));
    CHECK(full - logit(pred.predict(o13)) ==
          doctest::Approx(3.4).epsilon(1e-9));
}

TEST_CASE("probability vector validation") {
    ProbabilityVector bad{{0.5, 0.6}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    ProbabilityVector good{{0.5, 0.5}};
    good.validate();
    CHECK(good.argmax() == 0);
    CHECK(ProbabilityVector{{0.1, 0.2, 0.7}}.argmax() == 2);
}

TEST_CASE("graph backend reports availability consistently") {
    if (!graph_model_backend_available())
        CHECK_THROWS_AS(
            make_graph_model_predictor("missing.onnx", {}, 10), IoError);
}
