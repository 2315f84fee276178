#include "pfbench/mask.hpp"

#include "pfbench/errors.hpp"

namespace pfb {

SuperpixelMask::SuperpixelMask(std::size_t width, std::size_t height,
                               std::vector<std::int32_t> labels, std::size_t n)
    : width_(width), height_(height), n_(n), labels_(std::move(labels)) {
    validate();
}

std::vector<std::size_t> SuperpixelMask::sizes() const {
    std::vector<std::size_t> counts(n_, 0);
    for (auto l : labels_) ++counts[static_cast<std::size_t>(l)];
    return counts;
}

void SuperpixelMask::validate() const {
    if (width_ < 1 || height_ < 1)
        throw ValidationError("mask dimensions must be >= 1");
    if (n_ < 1) throw ValidationError("mask must have at least one superpixel");
    if (labels_.size() != width_ * height_)
        throw ValidationError("mask label count does not match dimensions");
    std::vector<bool> seen(n_, false);
    for (auto l : labels_) {
        if (l < 0 || static_cast<std::size_t>(l) >= n_)
            throw ValidationError("mask label out of range");
        seen[static_cast<std::size_t>(l)] = true;
    }
    for (std::size_t i = 0; i < n_; ++i)
        if (!seen[i]) throw ValidationError("empty superpixel in mask");
}

}  // namespace pfb
