#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pfbench/image.hpp"
#include "pfbench/mask.hpp"

namespace pfb {

struct ProbabilityVector {
    std::vector<double> probs;

    std::size_t argmax() const;
    double max() const;
    /// Entries in [0,1], sum 1 within 1e-6.
    void validate() const;
};

/// Monotone response curve mapping a kept fraction in [0,1] to a probability.
struct ResponseCurve {
    enum class Kind { linear, power, saturating };
    Kind kind = Kind::linear;
    double param = 1.0;  // exponent for power, saturation point for saturating

    double eval(double u) const;
};

/// Read-only, shareable model handle. predict_batch never mutates state.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual std::size_t class_count() const = 0;
    virtual std::vector<ProbabilityVector> predict_batch(
        std::span<const ImageTensor> images) const = 0;

    ProbabilityVector predict(const ImageTensor& image) const;
};

/// probs[0] = g(1 - rho) where rho is the fraction of pixels equal (within
/// tolerance) to the designated fill color; the remainder is spread evenly
/// over the other classes.
class OcclusionFractionPredictor final : public Predictor {
public:
    OcclusionFractionPredictor(std::vector<float> fill_color,
                               ResponseCurve curve = {},
                               std::size_t class_count = 2,
                               float tolerance = 1.0f / 255.0f);

    std::size_t class_count() const override { return class_count_; }
    std::vector<ProbabilityVector> predict_batch(
        std::span<const ImageTensor> images) const override;

private:
    std::vector<float> fill_color_;
    ResponseCurve curve_;
    std::size_t class_count_;
    float tolerance_;
};

/// logit[0] = bias[0] + sum_i a_i * match_i(x), match_i = fraction of
/// superpixel i's pixels equal (within 1/255) to the reference image;
/// logit[c>0] = bias[c]. Softmax on top. Exactly additive in match_i.
class AdditiveLogitPredictor final : public Predictor {
public:
    AdditiveLogitPredictor(ImageTensor reference, SuperpixelMask mask,
                           std::vector<double> coefficients,
                           std::vector<float> anchor_color,
                           std::size_t class_count = 2,
                           std::vector<double> bias = {});

    std::size_t class_count() const override { return class_count_; }
    std::vector<ProbabilityVector> predict_batch(
        std::span<const ImageTensor> images) const override;

    const std::vector<double>& coefficients() const { return coefficients_; }
    const std::vector<float>& anchor_color() const { return anchor_color_; }
    const SuperpixelMask& mask() const { return mask_; }
    const ImageTensor& reference() const { return reference_; }

    /// Per-superpixel matched fraction for one input.
    std::vector<double> match_fractions(const ImageTensor& image) const;

private:
    ImageTensor reference_;
    SuperpixelMask mask_;
    std::vector<double> coefficients_;
    std::vector<float> anchor_color_;
    std::size_t class_count_;
    std::vector<double> bias_;
};

std::shared_ptr<AdditiveLogitPredictor> make_additive_logit_predictor(
    ImageTensor reference, SuperpixelMask mask, std::vector<double> coefficients,
    std::vector<float> anchor_color, std::size_t class_count = 2);

/// Preprocessing for the serialized-graph backend.
struct GraphPreprocess {
    std::size_t resize_width = 224;
    std::size_t resize_height = 224;
    std::vector<float> mean{0.485f, 0.456f, 0.406f};
    std::vector<float> stddev{0.229f, 0.224f, 0.225f};
    bool swap_rb = false;
};

/// Loads a serialized inference graph (ONNX) via the OpenCV dnn backend.
/// Throws IoError when the backend is compiled out or the model fails to load.
std::shared_ptr<Predictor> make_graph_model_predictor(
    const std::filesystem::path& model_path, const GraphPreprocess& preprocess,
    std::size_t class_count, bool apply_softmax = true);

/// Whether the graph backend is available in this build.
bool graph_model_backend_available();

}  // namespace pfb
