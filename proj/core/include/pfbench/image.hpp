#pragma once

#include <cstddef>
#include <vector>

namespace pfb {

/// Float raster, channel-last row-major, every value in [0, 1].
class ImageTensor {
public:
    ImageTensor() = default;
    ImageTensor(std::size_t width, std::size_t height, std::size_t channels);
    ImageTensor(std::size_t width, std::size_t height, std::size_t channels,
                std::vector<float> data);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t channels() const { return channels_; }
    std::size_t pixel_count() const { return width_ * height_; }

    float& at(std::size_t x, std::size_t y, std::size_t c) {
        return data_[(y * width_ + x) * channels_ + c];
    }
    float at(std::size_t x, std::size_t y, std::size_t c) const {
        return data_[(y * width_ + x) * channels_ + c];
    }

    std::vector<float>& data() { return data_; }
    const std::vector<float>& data() const { return data_; }

    /// Throws ValidationError unless all invariants hold.
    void validate() const;

    bool operator==(const ImageTensor& o) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::size_t channels_ = 0;
    std::vector<float> data_;
};

}  // namespace pfb
