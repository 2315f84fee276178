#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pfb {

/// Per-pixel labels partitioning an image into n superpixels (the feature set).
class SuperpixelMask {
public:
    SuperpixelMask() = default;
    SuperpixelMask(std::size_t width, std::size_t height,
                   std::vector<std::int32_t> labels, std::size_t n);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t n() const { return n_; }

    std::int32_t label_at(std::size_t x, std::size_t y) const {
        return labels_[y * width_ + x];
    }
    const std::vector<std::int32_t>& labels() const { return labels_; }

    /// Pixel count per superpixel.
    std::vector<std::size_t> sizes() const;

    /// Partition check: every label in range, no empty superpixel.
    void validate() const;

    bool operator==(const SuperpixelMask& o) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::size_t n_ = 0;
    std::vector<std::int32_t> labels_;
};

}  // namespace pfb
