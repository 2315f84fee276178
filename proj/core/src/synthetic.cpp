#include "pfbench/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "pfbench/errors.hpp"
#include "pfbench/rng.hpp"
#include "pfbench/segmentation.hpp"

namespace pfb {

namespace {

constexpr std::size_t kBlock = 4;

float random_channel_byte(StreamRng& rng, float anchor) {
    const long anchor_byte = std::lround(anchor * 255.0f);
    for (;;) {
        long b = static_cast<long>(rng.below(256));
        if (std::labs(b - anchor_byte) > 1)
            return static_cast<float>(b) / 255.0f;
    }
}

/// Splits `total` units among weights, each share at least 1, remainders to
/// the largest weights first.
std::vector<std::size_t> proportional_split(const std::vector<double>& weights,
                                            std::size_t total) {
    const std::size_t n = weights.size();
    if (total < n) throw ValidationError("not enough units to split");
    double wsum = 0;
    for (double w : weights) wsum += w;
    std::vector<std::size_t> counts(n, 1);
    std::vector<double> frac(n);
    std::size_t assigned = n;
    for (std::size_t i = 0; i < n; ++i) {
        double ideal = weights[i] / wsum * static_cast<double>(total);
        std::size_t extra =
            ideal > 1.0 ? static_cast<std::size_t>(ideal - 1.0) : 0;
        counts[i] += extra;
        assigned += extra;
        frac[i] = ideal - static_cast<double>(counts[i]);
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (frac[a] != frac[b]) return frac[a] > frac[b];
        return a < b;
    });
    for (std::size_t i = 0; assigned < total; ++i) {
        ++counts[order[i % n]];
        ++assigned;
    }
    return counts;
}

}  // namespace

ImageTensor make_synthetic_image(std::uint64_t seed, std::size_t width,
                                 std::size_t height, std::size_t channels,
                                 const std::vector<float>& anchor_color) {
    if (anchor_color.size() != channels)
        throw ValidationError("anchor color channel count mismatch");
    StreamRng rng{seed, hash_id("image")};
    const std::size_t bx = (width + kBlock - 1) / kBlock;
    const std::size_t by = (height + kBlock - 1) / kBlock;
    std::vector<float> palette(bx * by * channels);
    for (std::size_t b = 0; b < bx * by; ++b)
        for (std::size_t c = 0; c < channels; ++c)
            palette[b * channels + c] = random_channel_byte(rng, anchor_color[c]);

    ImageTensor img(width, height, channels);
    for (std::size_t y = 0; y < height; ++y)
        for (std::size_t x = 0; x < width; ++x) {
            std::size_t b = (y / kBlock) * bx + (x / kBlock);
            for (std::size_t c = 0; c < channels; ++c)
                img.at(x, y, c) = palette[b * channels + c];
        }
    return img;
}

SyntheticInstance make_additive_instance(std::uint64_t seed,
                                         std::size_t n_superpixels,
                                         std::size_t width,
                                         std::size_t height) {
    std::vector<float> anchor{0.5f, 0.5f, 0.5f};
    SyntheticInstance inst;
    inst.anchor_color = anchor;
    inst.image = make_synthetic_image(seed, width, height, 3, anchor);
    inst.mask = grid_segment(inst.image, n_superpixels);
    inst.image_id = StreamRng::mix(seed ^ hash_id("additive"));

    StreamRng rng{seed, hash_id("coefficients")};
    std::vector<double> coeffs(inst.mask.n());
    for (auto& a : coeffs) a = 0.5 + 1.5 * rng.next_double();
    inst.predictor = make_additive_logit_predictor(inst.image, inst.mask,
                                                   std::move(coeffs), anchor);
    return inst;
}

SyntheticInstance make_dominant_instance(std::uint64_t seed, std::size_t n,
                                         std::size_t n_dominant,
                                         ResponseCurve curve,
                                         std::size_t width,
                                         std::size_t height) {
    if (n_dominant == 0 || n_dominant >= n)
        throw ValidationError("need 0 < n_dominant < n");
    const std::size_t n_minor = n - n_dominant;
    if (width < n_minor || width < n_dominant || height < 2)
        throw ValidationError("image too small for dominant layout");

    StreamRng rng{seed, hash_id("dominant-weights")};
    std::vector<double> dom_w(n_dominant), min_w(n_minor);
    for (auto& w : dom_w) w = 5.0 + 2.0 * rng.next_double();
    for (auto& w : min_w) w = 0.02 + 0.02 * rng.next_double();

    // Dominant superpixels are column strips over all rows but the last;
    // minor ones partition the last row. Pixel counts follow the weights, so
    // the occlusion-fraction predictor sees a few heavy features and a tail
    // of near-irrelevant ones.
    auto dom_cols = proportional_split(dom_w, width);
    auto min_cols = proportional_split(min_w, width);

    std::vector<std::int32_t> labels(width * height);
    std::size_t x0 = 0;
    for (std::size_t i = 0; i < n_dominant; ++i) {
        for (std::size_t x = x0; x < x0 + dom_cols[i]; ++x)
            for (std::size_t y = 0; y + 1 < height; ++y)
                labels[y * width + x] = static_cast<std::int32_t>(i);
        x0 += dom_cols[i];
    }
    x0 = 0;
    for (std::size_t j = 0; j < n_minor; ++j) {
        for (std::size_t x = x0; x < x0 + min_cols[j]; ++x)
            labels[(height - 1) * width + x] =
                static_cast<std::int32_t>(n_dominant + j);
        x0 += min_cols[j];
    }

    std::vector<float> anchor{0.5f, 0.5f, 0.5f};
    SyntheticInstance inst;
    inst.anchor_color = anchor;
    inst.image = make_synthetic_image(seed, width, height, 3, anchor);
    inst.mask = SuperpixelMask(width, height, std::move(labels), n);
    inst.mask.validate();
    inst.image_id = StreamRng::mix(seed ^ hash_id("dominant") ^
                                   static_cast<std::uint64_t>(curve.kind) ^
                                   StreamRng::mix(static_cast<std::uint64_t>(
                                       curve.param * 4096.0)));
    inst.predictor =
        std::make_shared<OcclusionFractionPredictor>(anchor, curve);
    return inst;
}

}  // namespace pfb
