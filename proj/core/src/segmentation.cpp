#include "pfbench/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "pfbench/errors.hpp"
#include "pfbench/png_io.hpp"

namespace pfb {

void SlicParams::validate() const {
    if (n_target < 2) throw ValidationError("SLIC needs n_target >= 2");
    if (!(compactness > 0)) throw ValidationError("SLIC compactness must be > 0");
    if (max_iterations < 1) throw ValidationError("SLIC needs >= 1 iteration");
}

SuperpixelMask grid_segment(const ImageTensor& image, std::size_t n_target) {
    const std::size_t w = image.width();
    const std::size_t h = image.height();
    if (n_target < 2) throw ValidationError("grid_segment needs n_target >= 2");
    if (n_target > w * h)
        throw ValidationError("more superpixels requested than pixels");

    // Divisor pair (rows, cols) of n_target closest to the aspect ratio h/w.
    const double aspect = static_cast<double>(h) / static_cast<double>(w);
    std::size_t best_r = 1, best_c = n_target;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t r = 1; r <= n_target; ++r) {
        if (n_target % r != 0) continue;
        std::size_t c = n_target / r;
        double err = std::fabs(static_cast<double>(r) / c - aspect);
        if (err < best_err) {
            best_err = err;
            best_r = r;
            best_c = c;
        }
    }
    if (best_r > h || best_c > w)
        throw ValidationError("grid does not fit image dimensions");

    std::vector<std::int32_t> labels(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        std::size_t row = y * best_r / h;
        for (std::size_t x = 0; x < w; ++x) {
            std::size_t col = x * best_c / w;
            labels[y * w + x] = static_cast<std::int32_t>(row * best_c + col);
        }
    }
    return SuperpixelMask(w, h, std::move(labels), best_r * best_c);
}

SuperpixelMask import_mask(const std::filesystem::path& path,
                           std::optional<std::size_t> expect_width,
                           std::optional<std::size_t> expect_height) {
    LabelGrid grid = read_label_png16(path);
    if (expect_width && grid.width != *expect_width)
        throw ValidationError("mask width does not match image");
    if (expect_height && grid.height != *expect_height)
        throw ValidationError("mask height does not match image");
    if (grid.values.empty()) throw ValidationError("empty mask file");

    // Compact the label values that actually occur to {0,...,n-1}.
    std::map<std::uint16_t, std::int32_t> remap;
    for (auto v : grid.values) remap.emplace(v, 0);
    std::int32_t next = 0;
    for (auto& [value, label] : remap) label = next++;

    std::vector<std::int32_t> labels(grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i)
        labels[i] = remap.at(grid.values[i]);
    return SuperpixelMask(grid.width, grid.height, std::move(labels),
                          static_cast<std::size_t>(next));
}

void export_mask(const std::filesystem::path& path, const SuperpixelMask& mask) {
    if (mask.n() > 65536) throw IoError("mask has too many labels for PNG16");
    LabelGrid grid;
    grid.width = mask.width();
    grid.height = mask.height();
    grid.values.assign(mask.labels().begin(), mask.labels().end());
    write_label_png16(path, grid);
}

}  // namespace pfb
