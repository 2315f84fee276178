#include "pfbench/image.hpp"

#include <cmath>

#include "pfbench/errors.hpp"

namespace pfb {

ImageTensor::ImageTensor(std::size_t width, std::size_t height,
                         std::size_t channels)
    : width_(width),
      height_(height),
      channels_(channels),
      data_(width * height * channels, 0.0f) {
    if (width < 1 || height < 1 || channels < 1)
        throw ValidationError("image dimensions must be >= 1");
}

ImageTensor::ImageTensor(std::size_t width, std::size_t height,
                         std::size_t channels, std::vector<float> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    if (width < 1 || height < 1 || channels < 1)
        throw ValidationError("image dimensions must be >= 1");
    if (data_.size() != width * height * channels)
        throw ValidationError("image data size does not match dimensions");
}

void ImageTensor::validate() const {
    if (width_ < 1 || height_ < 1 || channels_ < 1)
        throw ValidationError("image dimensions must be >= 1");
    if (data_.size() != width_ * height_ * channels_)
        throw ValidationError("image data size does not match dimensions");
    for (float v : data_) {
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f)
            throw ValidationError("image values must be finite and in [0,1]");
    }
}

}  // namespace pfb
