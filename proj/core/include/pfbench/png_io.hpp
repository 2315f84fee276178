#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pfbench/image.hpp"

namespace pfb {

/// Loads an 8/16-bit PNG as a float image in [0,1]. Palette and alpha are
/// resolved; grayscale files come back with 1 channel, color with 3.
ImageTensor read_image_png(const std::filesystem::path& path);

/// Writes an 8-bit PNG (1 or 3 channels). Values are clamped and quantized.
void write_image_png(const std::filesystem::path& path, const ImageTensor& img);

struct LabelGrid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint16_t> values;
};

/// Reads a single-channel 16-bit PNG as raw label values (the mask format).
LabelGrid read_label_png16(const std::filesystem::path& path);

/// Writes raw label values as a single-channel 16-bit PNG.
void write_label_png16(const std::filesystem::path& path, const LabelGrid& grid);

}  // namespace pfb
