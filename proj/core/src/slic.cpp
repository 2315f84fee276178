#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "pfbench/errors.hpp"
#include "pfbench/segmentation.hpp"

namespace pfb {

namespace {

struct LabPixel {
    float l, a, b;
};

float srgb_to_linear(float v) {
    return v <= 0.04045f ? v / 12.92f : std::pow((v + 0.055f) / 1.055f, 2.4f);
}

float lab_f(float t) {
    constexpr float kDelta = 6.0f / 29.0f;
    return t > kDelta * kDelta * kDelta
               ? std::cbrt(t)
               : t / (3 * kDelta * kDelta) + 4.0f / 29.0f;
}

std::vector<LabPixel> to_lab(const ImageTensor& img) {
    const std::size_t w = img.width(), h = img.height();
    std::vector<LabPixel> lab(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            float r, g, b;
            if (img.channels() >= 3) {
                r = img.at(x, y, 0);
                g = img.at(x, y, 1);
                b = img.at(x, y, 2);
            } else {
                r = g = b = img.at(x, y, 0);
            }
            r = srgb_to_linear(r);
            g = srgb_to_linear(g);
            b = srgb_to_linear(b);
            // sRGB D65
            float X = 0.4124f * r + 0.3576f * g + 0.1805f * b;
            float Y = 0.2126f * r + 0.7152f * g + 0.0722f * b;
            float Z = 0.0193f * r + 0.1192f * g + 0.9505f * b;
            float fx = lab_f(X / 0.95047f);
            float fy = lab_f(Y);
            float fz = lab_f(Z / 1.08883f);
            lab[y * w + x] = {116.0f * fy - 16.0f, 500.0f * (fx - fy),
                              200.0f * (fy - fz)};
        }
    }
    return lab;
}

struct Center {
    double l = 0, a = 0, b = 0, x = 0, y = 0;
};

/// Merge connected components smaller than min_size into the neighboring
/// segment sharing the longest boundary, then compact labels.
SuperpixelMask enforce_connectivity(std::size_t w, std::size_t h,
                                    std::vector<std::int32_t> labels,
                                    std::size_t min_size) {
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};

    for (int pass = 0; pass < 8; ++pass) {
        // Connected components of the current labeling.
        std::vector<std::int32_t> comp(w * h, -1);
        std::vector<std::size_t> comp_size;
        std::int32_t n_comp = 0;
        for (std::size_t start = 0; start < w * h; ++start) {
            if (comp[start] != -1) continue;
            std::int32_t id = n_comp++;
            std::size_t size = 0;
            std::deque<std::size_t> queue{start};
            comp[start] = id;
            while (!queue.empty()) {
                std::size_t p = queue.front();
                queue.pop_front();
                ++size;
                int px = static_cast<int>(p % w), py = static_cast<int>(p / w);
                for (int d = 0; d < 4; ++d) {
                    int qx = px + dx[d], qy = py + dy[d];
                    if (qx < 0 || qy < 0 || qx >= static_cast<int>(w) ||
                        qy >= static_cast<int>(h))
                        continue;
                    std::size_t q = static_cast<std::size_t>(qy) * w + qx;
                    if (comp[q] == -1 && labels[q] == labels[p]) {
                        comp[q] = id;
                        queue.push_back(q);
                    }
                }
            }
            comp_size.push_back(size);
        }

        // Boundary length from each small component to neighbor labels.
        bool merged = false;
        std::vector<std::vector<std::pair<std::int32_t, std::size_t>>> contact(
            n_comp);
        for (std::size_t p = 0; p < w * h; ++p) {
            if (comp_size[comp[p]] >= min_size) continue;
            int px = static_cast<int>(p % w), py = static_cast<int>(p / w);
            for (int d = 0; d < 4; ++d) {
                int qx = px + dx[d], qy = py + dy[d];
                if (qx < 0 || qy < 0 || qx >= static_cast<int>(w) ||
                    qy >= static_cast<int>(h))
                    continue;
                std::size_t q = static_cast<std::size_t>(qy) * w + qx;
                if (comp[q] == comp[p]) continue;
                auto& edges = contact[comp[p]];
                auto it = std::find_if(edges.begin(), edges.end(),
                                       [&](auto& e) { return e.first == labels[q]; });
                if (it == edges.end())
                    edges.emplace_back(labels[q], 1);
                else
                    ++it->second;
            }
        }
        std::vector<std::int32_t> target(n_comp, -1);
        for (std::int32_t c = 0; c < n_comp; ++c) {
            if (contact[c].empty()) continue;
            auto best = std::max_element(
                contact[c].begin(), contact[c].end(),
                [](auto& a, auto& b) { return a.second < b.second; });
            target[c] = best->first;
        }
        for (std::size_t p = 0; p < w * h; ++p) {
            if (target[comp[p]] != -1) {
                labels[p] = target[comp[p]];
                merged = true;
            }
        }
        if (!merged) break;
    }

    // A label may still own several large components; give every connected
    // component its own label so each segment is 4-connected by construction.
    std::vector<std::int32_t> comp(w * h, -1);
    std::int32_t next = 0;
    for (std::size_t start = 0; start < w * h; ++start) {
        if (comp[start] != -1) continue;
        std::int32_t id = next++;
        std::deque<std::size_t> queue{start};
        comp[start] = id;
        while (!queue.empty()) {
            std::size_t p = queue.front();
            queue.pop_front();
            int px = static_cast<int>(p % w), py = static_cast<int>(p / w);
            for (int d = 0; d < 4; ++d) {
                int qx = px + dx[d], qy = py + dy[d];
                if (qx < 0 || qy < 0 || qx >= static_cast<int>(w) ||
                    qy >= static_cast<int>(h))
                    continue;
                std::size_t q = static_cast<std::size_t>(qy) * w + qx;
                if (comp[q] == -1 && labels[q] == labels[p]) {
                    comp[q] = id;
                    queue.push_back(q);
                }
            }
        }
    }
    return SuperpixelMask(w, h, std::move(comp),
                          static_cast<std::size_t>(next));
}

}  // namespace

SuperpixelMask slic_segment(const ImageTensor& image, const SlicParams& params,
                            std::uint64_t /*seed*/) {
    params.validate();
    const std::size_t w = image.width(), h = image.height();
    if (params.n_target > w * h)
        throw ValidationError("more superpixels requested than pixels");

    const std::vector<LabPixel> lab = to_lab(image);
    const double grid_step =
        std::sqrt(static_cast<double>(w) * h / params.n_target);

    // Regular lattice of initial centers.
    std::size_t nx = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(w / grid_step)));
    std::size_t ny = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(h / grid_step)));
    std::vector<Center> centers;
    centers.reserve(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            Center c;
            c.x = (i + 0.5) * w / nx;
            c.y = (j + 0.5) * h / ny;
            std::size_t px = std::min<std::size_t>(w - 1,
                                                   static_cast<std::size_t>(c.x));
            std::size_t py = std::min<std::size_t>(h - 1,
                                                   static_cast<std::size_t>(c.y));
            const LabPixel& p = lab[py * w + px];
            c.l = p.l;
            c.a = p.a;
            c.b = p.b;
            centers.push_back(c);
        }
    }

    const double lambda2 = params.compactness * params.compactness;
    const double s2 = grid_step * grid_step;
    std::vector<std::int32_t> labels(w * h, 0);
    std::vector<double> dist(w * h);

    for (std::size_t iter = 0; iter < params.max_iterations; ++iter) {
        std::fill(dist.begin(), dist.end(),
                  std::numeric_limits<double>::infinity());
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const Center& c = centers[k];
            const long x0 = std::max<long>(0, std::lround(c.x - 2 * grid_step));
            const long x1 = std::min<long>(w, std::lround(c.x + 2 * grid_step));
            const long y0 = std::max<long>(0, std::lround(c.y - 2 * grid_step));
            const long y1 = std::min<long>(h, std::lround(c.y + 2 * grid_step));
            for (long y = y0; y < y1; ++y) {
                for (long x = x0; x < x1; ++x) {
                    const LabPixel& p = lab[y * w + x];
                    double dl = p.l - c.l, da = p.a - c.a, db = p.b - c.b;
                    double ddx = x - c.x, ddy = y - c.y;
                    double d2 = dl * dl + da * da + db * db +
                                lambda2 * (ddx * ddx + ddy * ddy) / s2;
                    std::size_t idx = static_cast<std::size_t>(y) * w + x;
                    if (d2 < dist[idx]) {
                        dist[idx] = d2;
                        labels[idx] = static_cast<std::int32_t>(k);
                    }
                }
            }
        }
        // Any pixel outside every search window falls back to nearest center.
        for (std::size_t idx = 0; idx < w * h; ++idx) {
            if (std::isfinite(dist[idx])) continue;
            double x = static_cast<double>(idx % w), y = static_cast<double>(idx / w);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < centers.size(); ++k) {
                double ddx = x - centers[k].x, ddy = y - centers[k].y;
                double d2 = ddx * ddx + ddy * ddy;
                if (d2 < best) {
                    best = d2;
                    labels[idx] = static_cast<std::int32_t>(k);
                }
            }
        }

        std::vector<Center> next(centers.size());
        std::vector<std::size_t> counts(centers.size(), 0);
        for (std::size_t idx = 0; idx < w * h; ++idx) {
            Center& c = next[labels[idx]];
            const LabPixel& p = lab[idx];
            c.l += p.l;
            c.a += p.a;
            c.b += p.b;
            c.x += static_cast<double>(idx % w);
            c.y += static_cast<double>(idx / w);
            ++counts[labels[idx]];
        }
        double movement = 0;
        for (std::size_t k = 0; k < centers.size(); ++k) {
            if (counts[k] == 0) continue;  // orphan center keeps its position
            Center c = next[k];
            double inv = 1.0 / counts[k];
            c.l *= inv;
            c.a *= inv;
            c.b *= inv;
            c.x *= inv;
            c.y *= inv;
            movement += std::fabs(c.x - centers[k].x) +
                        std::fabs(c.y - centers[k].y);
            centers[k] = c;
        }
        if (movement < 0.5) break;
    }

    const std::size_t min_size =
        std::max<std::size_t>(1, (w * h / params.n_target) / 4);
    return enforce_connectivity(w, h, std::move(labels), min_size);
}

}  // namespace pfb
