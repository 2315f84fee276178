#include <doctest.h>

#include <filesystem>
#include <queue>
#include <set>

#include "pfbench/errors.hpp"
#include "pfbench/png_io.hpp"
#include "pfbench/segmentation.hpp"
#include "pfbench/synthetic.hpp"

using namespace pfb;

namespace {

ImageTensor flat_image(std::size_t w, std::size_t h) {
    ImageTensor img(w, h, 3);
    for (auto& v : img.data()) v = 0.3f;
    return img;
}

// Every label region must be 4-connected.
bool connected(const SuperpixelMask& mask) {
    std::set<std::int32_t> done;
    std::vector<bool> visited(mask.width() * mask.height(), false);
    for (std::size_t y = 0; y < mask.height(); ++y)
        for (std::size_t x = 0; x < mask.width(); ++x) {
            std::int32_t label = mask.label_at(x, y);
            if (visited[y * mask.width() + x]) continue;
            if (done.count(label)) return false;  // second component
            done.insert(label);
            std::queue<std::pair<std::size_t, std::size_t>> q;
            q.push({x, y});
            visited[y * mask.width() + x] = true;
            while (!q.empty()) {
                auto [cx, cy] = q.front();
                q.pop();
                const int dx[] = {1, -1, 0, 0};
                const int dy[] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    std::size_t nx = cx + static_cast<std::size_t>(dx[d]);
                    std::size_t ny = cy + static_cast<std::size_t>(dy[d]);
                    if (nx >= mask.width() || ny >= mask.height()) continue;
                    if (visited[ny * mask.width() + nx]) continue;
                    if (mask.label_at(nx, ny) != label) continue;
                    visited[ny * mask.width() + nx] = true;
                    q.push({nx, ny});
                }
            }
        }
    return true;
}

}  // namespace

TEST_CASE("grid picks the divisor pair closest to the aspect ratio") {
    // Square image, n=16: 4x4 tiling of 64-pixel blocks.
    auto mask = grid_segment(flat_image(32, 32), 16);
    CHECK(mask.n() == 16);
    for (std::size_t size : mask.sizes()) CHECK(size == 64);
    CHECK(mask.label_at(0, 0) == 0);
    CHECK(mask.label_at(8, 0) == 1);
    CHECK(mask.label_at(0, 8) == 4);
    CHECK(mask.label_at(31, 31) == 15);

    // Wide image, n=8: 2 rows x 4 cols (aspect 0.5 matches exactly).
    auto wide = grid_segment(flat_image(48, 24), 8);
    CHECK(wide.n() == 8);
    CHECK(wide.label_at(0, 0) == 0);
    CHECK(wide.label_at(47, 23) == 7);
    for (std::size_t size : wide.sizes()) CHECK(size == 144);
}

TEST_CASE("grid handles non-divisible dimensions") {
    auto mask = grid_segment(flat_image(10, 7), 6);
    mask.validate();
    CHECK(mask.n() == 6);
    CHECK(connected(mask));
}

TEST_CASE("grid rejects degenerate requests") {
    CHECK_THROWS_AS(grid_segment(flat_image(4, 4), 1), ValidationError);
    CHECK_THROWS_AS(grid_segment(flat_image(2, 2), 5), ValidationError);
}

TEST_CASE("slic yields a connected partition near the target count") {
    ImageTensor img = make_synthetic_image(5, 40, 40, 3, {0.5f, 0.5f, 0.5f});
    SlicParams params;
    params.n_target = 16;
    auto mask = slic_segment(img, params);
    mask.validate();
    CHECK(mask.n() >= 8);
    CHECK(mask.n() <= 32);
    CHECK(connected(mask));
}

TEST_CASE("slic is deterministic") {
    ImageTensor img = make_synthetic_image(9, 33, 27, 3, {0.5f, 0.5f, 0.5f});
    SlicParams params;
    params.n_target = 12;
    auto a = slic_segment(img, params);
    auto b = slic_segment(img, params);
    CHECK(a.labels() == b.labels());
}

TEST_CASE("mask export/import round-trip with label compaction") {
    auto dir = std::filesystem::temp_directory_path() / "pfbench_test";
    std::filesystem::create_directories(dir);
    auto path = dir / "mask_rt.png";

    SuperpixelMask mask(4, 2, {0, 0, 1, 1, 2, 2, 3, 3}, 4);
    export_mask(path, mask);
    auto back = import_mask(path, 4, 2);
    CHECK(back == mask);

    // Sparse labels come back compacted.
    LabelGrid sparse;
    sparse.width = 2;
    sparse.height = 2;
    sparse.values = {7, 7, 900, 40};
    write_label_png16(dir / "sparse.png", sparse);
    auto compact = import_mask(dir / "sparse.png");
    CHECK(compact.n() == 3);
    CHECK(compact.label_at(0, 0) == 0);   // 7 -> 0
    CHECK(compact.label_at(1, 1) == 1);   // 40 -> 1
    CHECK(compact.label_at(0, 1) == 2);   // 900 -> 2

    CHECK_THROWS_AS(import_mask(path, 5, 2), ValidationError);
}
