#include <benchmark/benchmark.h>

#include "pfbench/attribution.hpp"
#include "pfbench/imputer.hpp"
#include "pfbench/measures.hpp"
#include "pfbench/segmentation.hpp"
#include "pfbench/synthetic.hpp"

namespace {

using namespace pfb;

const std::vector<float> kAnchor{0.5f, 0.5f, 0.5f};

void BM_SlicSegment(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    ImageTensor img = make_synthetic_image(1, 96, 96, 3, kAnchor);
    SlicParams params;
    params.n_target = n;
    for (auto _ : state)
        benchmark::DoNotOptimize(slic_segment(img, params));
}
BENCHMARK(BM_SlicSegment)->Arg(16)->Arg(64);

void BM_InpaintImpute(benchmark::State& state) {
    ImageTensor img = make_synthetic_image(2, 64, 64, 3, kAnchor);
    SuperpixelMask mask = grid_segment(img, 16);
    Coalition present = Coalition::from_members(16, {0, 1, 2, 3, 4, 5, 6, 7});
    OcclusionRequest req{img, mask, present, 0, 1};
    for (auto _ : state)
        benchmark::DoNotOptimize(inpaint_impute(req, 3));
}
BENCHMARK(BM_InpaintImpute);

void BM_ShapleyExact(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    ValueFunction v = [n](const Coalition& s) {
        return static_cast<double>(s.size()) / static_cast<double>(n);
    };
    for (auto _ : state)
        benchmark::DoNotOptimize(shapley_exact(v, n));
}
BENCHMARK(BM_ShapleyExact)->Arg(8)->Arg(12)->Arg(16);

void BM_ShapleyMc(benchmark::State& state) {
    auto m = static_cast<std::size_t>(state.range(0));
    ValueFunction v = [](const Coalition& s) {
        return static_cast<double>(s.size());
    };
    for (auto _ : state)
        benchmark::DoNotOptimize(shapley_mc(v, 25, m, StreamRng{1}));
}
BENCHMARK(BM_ShapleyMc)->Arg(250)->Arg(2000);

void BM_PfCurve(benchmark::State& state) {
    auto inst = make_additive_instance(3, 16, 32, 32);
    auto imputer = make_mean_imputer(kAnchor);
    EvalContext ctx{*inst.predictor, inst.image, inst.mask, imputer,
                    1,               1,          inst.image_id, nullptr};
    FeatureOrdering pi{[] {
        std::vector<std::size_t> o(16);
        for (std::size_t i = 0; i < 16; ++i) o[i] = i;
        return o;
    }()};
    for (auto _ : state)
        benchmark::DoNotOptimize(pf_curve(ctx, pi, 0));
}
BENCHMARK(BM_PfCurve);

}  // namespace

BENCHMARK_MAIN();
