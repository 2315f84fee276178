#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "pfbench/image.hpp"
#include "pfbench/mask.hpp"

namespace pfb {

struct SlicParams {
    std::size_t n_target = 25;
    double compactness = 1.0;  // lambda
    std::size_t max_iterations = 10;

    void validate() const;
};

/// Rectangular tiling. rows x cols is the divisor pair of n_target closest to
/// the image aspect ratio; the mask never depends on pixel values.
SuperpixelMask grid_segment(const ImageTensor& image, std::size_t n_target);

/// SLIC in CIELAB with distance sqrt(d_lab^2 + lambda^2 (d_xy/S)^2),
/// S = sqrt(w*h/n_target). Small fragments are merged into the neighbor with
/// the longest shared boundary and labels compacted, so the returned n can
/// deviate from n_target. Deterministic; the seed is accepted for interface
/// stability but the algorithm itself has no random choices.
SuperpixelMask slic_segment(const ImageTensor& image, const SlicParams& params,
                            std::uint64_t seed = 0);

/// Loads a 16-bit grayscale PNG as a mask (pixel value = label).
/// Non-contiguous labels are compacted to {0,...,n-1}. When expected
/// dimensions are given, a mismatch is an error. This is also how externally
/// produced semantic masks enter the system.
SuperpixelMask import_mask(const std::filesystem::path& path,
                           std::optional<std::size_t> expect_width = {},
                           std::optional<std::size_t> expect_height = {});

/// Writes a mask in the import format.
void export_mask(const std::filesystem::path& path, const SuperpixelMask& mask);

}  // namespace pfb
