#include "pfbench/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "pfbench/errors.hpp"

#ifdef PFBENCH_HAVE_OPENCV_DNN
#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>
#include <opencv2/imgproc.hpp>
#endif

namespace pfb {

std::size_t ProbabilityVector::argmax() const {
    return static_cast<std::size_t>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
}

double ProbabilityVector::max() const {
    return *std::max_element(probs.begin(), probs.end());
}

void ProbabilityVector::validate() const {
    if (probs.empty()) throw ValidationError("empty probability vector");
    double sum = 0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0)
            throw ValidationError("probability outside [0,1]");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-6)
        throw ValidationError("probabilities do not sum to 1");
}

double ResponseCurve::eval(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    switch (kind) {
        case Kind::linear:
            return u;
        case Kind::power:
            return std::pow(u, param);
        case Kind::saturating:
            return std::min(1.0, u / param);
    }
    return u;
}

ProbabilityVector Predictor::predict(const ImageTensor& image) const {
    return predict_batch(std::span<const ImageTensor>(&image, 1)).front();
}

namespace {

ProbabilityVector target_class_probs(double p0, std::size_t classes) {
    p0 = std::clamp(p0, 0.0, 1.0);
    ProbabilityVector out;
    out.probs.assign(classes, (1.0 - p0) / static_cast<double>(classes - 1));
    out.probs[0] = p0;
    return out;
}

ProbabilityVector softmax(const std::vector<double>& logits) {
    double m = *std::max_element(logits.begin(), logits.end());
    ProbabilityVector out;
    out.probs.resize(logits.size());
    double sum = 0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out.probs[i] = std::exp(logits[i] - m);
        sum += out.probs[i];
    }
    for (auto& p : out.probs) p /= sum;
    return out;
}

}  // namespace

OcclusionFractionPredictor::OcclusionFractionPredictor(
    std::vector<float> fill_color, ResponseCurve curve, std::size_t class_count,
    float tolerance)
    : fill_color_(std::move(fill_color)),
      curve_(curve),
      class_count_(class_count),
      tolerance_(tolerance) {
    if (class_count_ < 2) throw ValidationError("need at least 2 classes");
}

std::vector<ProbabilityVector> OcclusionFractionPredictor::predict_batch(
    std::span<const ImageTensor> images) const {
    std::vector<ProbabilityVector> out;
    out.reserve(images.size());
    for (const auto& img : images) {
        if (img.channels() != fill_color_.size())
            throw ValidationError("fill color does not match image channels");
        const std::size_t c = img.channels();
        std::size_t filled = 0;
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            bool match = true;
            for (std::size_t ch = 0; ch < c && match; ++ch)
                match = std::fabs(img.data()[i * c + ch] - fill_color_[ch]) <=
                        tolerance_;
            if (match) ++filled;
        }
        double rho = static_cast<double>(filled) / img.pixel_count();
        out.push_back(target_class_probs(curve_.eval(1.0 - rho), class_count_));
    }
    return out;
}

AdditiveLogitPredictor::AdditiveLogitPredictor(
    ImageTensor reference, SuperpixelMask mask, std::vector<double> coefficients,
    std::vector<float> anchor_color, std::size_t class_count,
    std::vector<double> bias)
    : reference_(std::move(reference)),
      mask_(std::move(mask)),
      coefficients_(std::move(coefficients)),
      anchor_color_(std::move(anchor_color)),
      class_count_(class_count),
      bias_(std::move(bias)) {
    if (coefficients_.size() != mask_.n())
        throw ValidationError("one coefficient per superpixel required");
    if (class_count_ < 2) throw ValidationError("need at least 2 classes");
    if (bias_.empty()) bias_.assign(class_count_, 0.0);
    if (bias_.size() != class_count_)
        throw ValidationError("one bias per class required");
    if (mask_.width() != reference_.width() ||
        mask_.height() != reference_.height())
        throw ValidationError("mask does not match reference image");
}

std::vector<double> AdditiveLogitPredictor::match_fractions(
    const ImageTensor& image) const {
    if (image.width() != reference_.width() ||
        image.height() != reference_.height() ||
        image.channels() != reference_.channels())
        throw ValidationError("input does not match reference dimensions");
    constexpr float kTol = 1.0f / 255.0f;
    const std::size_t c = image.channels();
    std::vector<std::size_t> matched(mask_.n(), 0);
    std::vector<std::size_t> total(mask_.n(), 0);
    for (std::size_t y = 0; y < image.height(); ++y) {
        for (std::size_t x = 0; x < image.width(); ++x) {
            std::int32_t label = mask_.label_at(x, y);
            ++total[label];
            bool match = true;
            for (std::size_t ch = 0; ch < c && match; ++ch)
                match = std::fabs(image.at(x, y, ch) - reference_.at(x, y, ch)) <=
                        kTol;
            if (match) ++matched[label];
        }
    }
    std::vector<double> frac(mask_.n());
    for (std::size_t i = 0; i < mask_.n(); ++i)
        frac[i] = static_cast<double>(matched[i]) / total[i];
    return frac;
}

std::vector<ProbabilityVector> AdditiveLogitPredictor::predict_batch(
    std::span<const ImageTensor> images) const {
    std::vector<ProbabilityVector> out;
    out.reserve(images.size());
    for (const auto& img : images) {
        std::vector<double> frac = match_fractions(img);
        std::vector<double> logits = bias_;
        for (std::size_t i = 0; i < frac.size(); ++i)
            logits[0] += coefficients_[i] * frac[i];
        out.push_back(softmax(logits));
    }
    return out;
}

std::shared_ptr<AdditiveLogitPredictor> make_additive_logit_predictor(
    ImageTensor reference, SuperpixelMask mask, std::vector<double> coefficients,
    std::vector<float> anchor_color, std::size_t class_count) {
    return std::make_shared<AdditiveLogitPredictor>(
        std::move(reference), std::move(mask), std::move(coefficients),
        std::move(anchor_color), class_count);
}

#ifdef PFBENCH_HAVE_OPENCV_DNN

namespace {

class GraphModelPredictor final : public Predictor {
public:
    GraphModelPredictor(const std::filesystem::path& path,
                        GraphPreprocess preprocess, std::size_t class_count,
                        bool apply_softmax)
        : preprocess_(std::move(preprocess)),
          class_count_(class_count),
          apply_softmax_(apply_softmax) {
        try {
            net_ = cv::dnn::readNetFromONNX(path.string());
        } catch (const cv::Exception& e) {
            throw IoError("failed to load model " + path.string() + ": " +
                          e.what());
        }
    }

    std::size_t class_count() const override { return class_count_; }

    std::vector<ProbabilityVector> predict_batch(
        std::span<const ImageTensor> images) const override {
        std::vector<ProbabilityVector> out;
        out.reserve(images.size());
        for (const auto& img : images) out.push_back(run_one(img));
        return out;
    }

private:
    ProbabilityVector run_one(const ImageTensor& img) const {
        if (img.channels() != 3)
            throw ValidationError("graph model expects 3-channel input");
        cv::Mat m(static_cast<int>(img.height()), static_cast<int>(img.width()),
                  CV_32FC3, const_cast<float*>(img.data().data()));
        cv::Mat resized;
        cv::resize(m, resized,
                   cv::Size(static_cast<int>(preprocess_.resize_width),
                            static_cast<int>(preprocess_.resize_height)));
        if (preprocess_.swap_rb) cv::cvtColor(resized, resized, cv::COLOR_RGB2BGR);
        std::vector<cv::Mat> ch(3);
        cv::split(resized, ch);
        for (int i = 0; i < 3; ++i)
            ch[i] = (ch[i] - preprocess_.mean[i]) / preprocess_.stddev[i];
        cv::Mat blob;
        cv::merge(ch, blob);
        cv::Mat input = cv::dnn::blobFromImage(blob);

        cv::Mat result;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            net_.setInput(input);
            result = net_.forward().clone();
        }
        result = result.reshape(1, 1);
        std::vector<double> logits(result.cols);
        for (int i = 0; i < result.cols; ++i)
            logits[static_cast<std::size_t>(i)] = result.at<float>(0, i);
        if (logits.size() != class_count_)
            throw ValidationError("model output size mismatch");
        if (!apply_softmax_) {
            ProbabilityVector pv{logits};
            pv.validate();
            return pv;
        }
        double mx = *std::max_element(logits.begin(), logits.end());
        double sum = 0;
        for (auto& l : logits) {
            l = std::exp(l - mx);
            sum += l;
        }
        for (auto& l : logits) l /= sum;
        return ProbabilityVector{std::move(logits)};
    }

    mutable cv::dnn::Net net_;
    mutable std::mutex mutex_;
    GraphPreprocess preprocess_;
    std::size_t class_count_;
    bool apply_softmax_;
};

}  // namespace

std::shared_ptr<Predictor> make_graph_model_predictor(
    const std::filesystem::path& model_path, const GraphPreprocess& preprocess,
    std::size_t class_count, bool apply_softmax) {
    return std::make_shared<GraphModelPredictor>(model_path, preprocess,
                                                 class_count, apply_softmax);
}

bool graph_model_backend_available() { return true; }

#else

std::shared_ptr<Predictor> make_graph_model_predictor(
    const std::filesystem::path&, const GraphPreprocess&, std::size_t, bool) {
    throw IoError("graph model backend not compiled in (OpenCV dnn missing)");
}

bool graph_model_backend_available() { return false; }

#endif

}  // namespace pfb
