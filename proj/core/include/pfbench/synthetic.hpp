#pragma once

#include <memory>

#include "pfbench/image.hpp"
#include "pfbench/mask.hpp"
#include "pfbench/predictor.hpp"

namespace pfb {

/// One synthetic benchmark unit: image, feature set and a predictor with
/// known structure.
struct SyntheticInstance {
    ImageTensor image;
    SuperpixelMask mask;
    std::shared_ptr<Predictor> predictor;
    std::vector<float> anchor_color;
    std::uint64_t image_id = 0;
};

/// Random blocky image whose pixels never collide with the anchor color, so
/// anchor-filled occlusions are always detectable.
ImageTensor make_synthetic_image(std::uint64_t seed, std::size_t width,
                                 std::size_t height, std::size_t channels,
                                 const std::vector<float>& anchor_color);

/// Grid-segmented image plus an additive-logit predictor with positive random
/// coefficients; its exact Shapley ordering is the coefficient ordering.
SyntheticInstance make_additive_instance(std::uint64_t seed,
                                         std::size_t n_superpixels,
                                         std::size_t width, std::size_t height);

/// A mask with n_dominant large superpixels and n - n_dominant tiny ones,
/// paired with an occlusion-fraction predictor shaped by `curve`. The
/// superpixel sizes act as feature weights, which pins the Shapley-ordered
/// PF curves near their envelopes while the curve shape moves the random
/// baseline.
SyntheticInstance make_dominant_instance(std::uint64_t seed, std::size_t n,
                                         std::size_t n_dominant,
                                         ResponseCurve curve,
                                         std::size_t width, std::size_t height);

}  // namespace pfb
