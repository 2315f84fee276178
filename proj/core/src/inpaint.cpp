#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "pfbench/errors.hpp"
#include "pfbench/imputer.hpp"

namespace pfb {

namespace {

enum class State : std::uint8_t { known, band, inside };

constexpr double kFar = 1e6;

struct HeapEntry {
    double t;
    std::size_t idx;
    bool operator>(const HeapEntry& o) const { return t > o.t; }
};

/// Eikonal update |grad T| = 1 from already-known axis neighbors.
double solve_arrival(const std::vector<double>& T, const std::vector<State>& st,
                     std::size_t w, std::size_t h, std::size_t x,
                     std::size_t y) {
    auto axis_min = [&](int dx, int dy) -> double {
        double best = kFar;
        for (int sgn : {-1, 1}) {
            long nx = static_cast<long>(x) + sgn * dx;
            long ny = static_cast<long>(y) + sgn * dy;
            if (nx < 0 || ny < 0 || nx >= static_cast<long>(w) ||
                ny >= static_cast<long>(h))
                continue;
            std::size_t q = static_cast<std::size_t>(ny) * w + nx;
            if (st[q] == State::known) best = std::min(best, T[q]);
        }
        return best;
    };
    double tx = axis_min(1, 0);
    double ty = axis_min(0, 1);
    double lo = std::min(tx, ty), hi = std::max(tx, ty);
    if (lo >= kFar) return kFar;
    if (hi - lo >= 1.0) return lo + 1.0;
    double d = hi - lo;
    return 0.5 * (tx + ty + std::sqrt(2.0 - d * d));
}

}  // namespace

ImageTensor inpaint_impute(const OcclusionRequest& req, int radius) {
    req.validate();
    if (radius < 1) throw ValidationError("inpaint radius must be >= 1");
    if (req.present.is_empty())
        throw ValidationError("inpainting needs at least one kept pixel");

    const std::size_t w = req.image.width();
    const std::size_t h = req.image.height();
    const std::size_t c = req.image.channels();

    ImageTensor out = req.image;
    std::vector<State> st(w * h, State::known);
    std::vector<double> T(w * h, 0.0);
    bool any_inside = false;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            if (!req.present.contains(req.mask.label_at(x, y))) {
                st[y * w + x] = State::inside;
                T[y * w + x] = kFar;
                any_inside = true;
            }
        }
    }
    if (!any_inside) return out;

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            std::size_t p = y * w + x;
            if (st[p] != State::inside) continue;
            double t = solve_arrival(T, st, w, h, x, y);
            if (t < kFar) {
                st[p] = State::band;
                T[p] = t;
                heap.push({t, p});
            }
        }
    }

    const long r = radius;
    while (!heap.empty()) {
        auto [t, p] = heap.top();
        heap.pop();
        if (st[p] == State::known || t > T[p]) continue;  // stale entry
        const std::size_t px = p % w, py = p / w;

        // Normal direction: gradient of the arrival time at p.
        auto t_at = [&](long xx, long yy) -> double {
            if (xx < 0 || yy < 0 || xx >= static_cast<long>(w) ||
                yy >= static_cast<long>(h))
                return T[p];
            std::size_t q = static_cast<std::size_t>(yy) * w + xx;
            return st[q] == State::inside ? T[p] : T[q];
        };
        double gx = 0.5 * (t_at(px + 1, py) - t_at(static_cast<long>(px) - 1, py));
        double gy = 0.5 * (t_at(px, py + 1) - t_at(px, static_cast<long>(py) - 1));
        double gnorm = std::hypot(gx, gy);

        std::vector<double> value(c, 0.0);
        double wsum = 0.0;
        for (long dy = -r; dy <= r; ++dy) {
            for (long dx = -r; dx <= r; ++dx) {
                long qx = static_cast<long>(px) + dx;
                long qy = static_cast<long>(py) + dy;
                if (qx < 0 || qy < 0 || qx >= static_cast<long>(w) ||
                    qy >= static_cast<long>(h))
                    continue;
                std::size_t q = static_cast<std::size_t>(qy) * w + qx;
                if (st[q] != State::known) continue;
                double d2 = static_cast<double>(dx * dx + dy * dy);
                if (d2 == 0.0 || d2 > static_cast<double>(r * r)) continue;
                double dir = 1.0;
                if (gnorm > 1e-12)
                    dir = std::max(
                        1e-6, std::fabs((dx * gx + dy * gy) / (std::sqrt(d2) * gnorm)));
                double dst = 1.0 / d2;
                double lev = 1.0 / (1.0 + std::fabs(T[p] - T[q]));
                double weight = dir * dst * lev;
                for (std::size_t ch = 0; ch < c; ++ch)
                    value[ch] += weight * out.data()[q * c + ch];
                wsum += weight;
            }
        }
        if (wsum > 0.0) {
            for (std::size_t ch = 0; ch < c; ++ch)
                out.data()[p * c + ch] =
                    static_cast<float>(std::clamp(value[ch] / wsum, 0.0, 1.0));
        }
        st[p] = State::known;

        const int nx4[4] = {1, -1, 0, 0};
        const int ny4[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            long qx = static_cast<long>(px) + nx4[d];
            long qy = static_cast<long>(py) + ny4[d];
            if (qx < 0 || qy < 0 || qx >= static_cast<long>(w) ||
                qy >= static_cast<long>(h))
                continue;
            std::size_t q = static_cast<std::size_t>(qy) * w + qx;
            if (st[q] == State::known) continue;
            double tq = solve_arrival(T, st, w, h, qx, qy);
            if (tq < T[q]) {
                T[q] = tq;
                st[q] = State::band;
                heap.push({tq, q});
            }
        }
    }
    return out;
}

}  // namespace pfb
