#include "pfbench/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <memory>

#include "pfbench/errors.hpp"

namespace pfb {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string());
    return f;
}

}  // namespace

ImageTensor read_image_png(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode PNG " + path.string());
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const std::size_t w = png_get_image_width(png, info);
    const std::size_t h = png_get_image_height(png, info);
    const std::size_t c = png_get_channels(png, info);

    std::vector<png_byte> row(w * c);
    ImageTensor img(w, h, c);
    for (std::size_t y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (std::size_t i = 0; i < w * c; ++i)
            img.data()[y * w * c + i] = static_cast<float>(row[i]) / 255.0f;
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_image_png(const std::filesystem::path& path, const ImageTensor& img) {
    if (img.channels() != 1 && img.channels() != 3)
        throw IoError("PNG writer supports 1 or 3 channels");
    FilePtr f = open_file(path, "wb");
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode PNG " + path.string());
    }
    png_init_io(png, f.get());
    const int color =
        img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width(), img.height(), 8, color,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const std::size_t stride = img.width() * img.channels();
    std::vector<png_byte> row(stride);
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t i = 0; i < stride; ++i) {
            float v = std::clamp(img.data()[y * stride + i], 0.0f, 1.0f);
            row[i] = static_cast<png_byte>(v * 255.0f + 0.5f);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

LabelGrid read_label_png16(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode mask PNG " + path.string());
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY)
        throw IoError("mask PNG must be single-channel grayscale");
    const int depth = png_get_bit_depth(png, info);
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    LabelGrid grid;
    grid.width = png_get_image_width(png, info);
    grid.height = png_get_image_height(png, info);
    grid.values.resize(grid.width * grid.height);

    std::vector<png_byte> row(png_get_rowbytes(png, info));
    for (std::size_t y = 0; y < grid.height; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (std::size_t x = 0; x < grid.width; ++x) {
            // libpng emits 16-bit samples big-endian
            grid.values[y * grid.width + x] =
                depth == 16
                    ? static_cast<std::uint16_t>((row[2 * x] << 8) | row[2 * x + 1])
                    : row[x];
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return grid;
}

void write_label_png16(const std::filesystem::path& path, const LabelGrid& grid) {
    FilePtr f = open_file(path, "wb");
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode mask PNG " + path.string());
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, grid.width, grid.height, 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(grid.width * 2);
    for (std::size_t y = 0; y < grid.height; ++y) {
        for (std::size_t x = 0; x < grid.width; ++x) {
            std::uint16_t v = grid.values[y * grid.width + x];
            row[2 * x] = static_cast<png_byte>(v >> 8);
            row[2 * x + 1] = static_cast<png_byte>(v & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

}  // namespace pfb
