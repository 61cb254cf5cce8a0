#include <benchmark/benchmark.h>

#include "stereo_avoid/controller.hpp"
#include "stereo_avoid/disparity.hpp"
#include "stereo_avoid/regions.hpp"
#include "stereo_avoid/sim.hpp"

using namespace stereo_avoid;

namespace {

const StereoPair& corridor_frame() {
    static const StereoPair pair = [] {
        const auto sc = sim::empty_corridor();
        sim::RenderOptions opt;
        opt.noise_seed = 7;
        return sim::render_stereo(sc.scene, sc.start, CameraRig{}, opt);
    }();
    return pair;
}

// Arg: worker count.
void BM_BlockMatch(benchmark::State& state) {
    const auto& pair = corridor_frame();
    const MatchParams p;
    for (auto _ : state) benchmark::DoNotOptimize(block_match(pair, p, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_BlockMatch)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_FusedPipeline(benchmark::State& state) {
    const auto& pair = corridor_frame();
    const auto grid = make_grid(pair.width(), pair.height(), 150);
    const DepthLUT lut;
    for (auto _ : state)
        benchmark::DoNotOptimize(fused_pipeline(pair, MatchParams{}, grid, lut, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_FusedPipeline)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_UnfusedPipeline(benchmark::State& state) {
    const auto& pair = corridor_frame();
    const auto grid = make_grid(pair.width(), pair.height(), 150);
    const DepthLUT lut;
    for (auto _ : state) benchmark::DoNotOptimize(unfused_pipeline(pair, MatchParams{}, grid, lut, 1));
}
BENCHMARK(BM_UnfusedPipeline)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_Steer(benchmark::State& state) {
    const AvoidanceController ctl;
    RegionDepths d = RegionDepths::filled(3.0);
    d[Region::center] = 0.6;
    d[Region::down] = 0.6;
    d[Region::left] = 1.2;
    for (auto _ : state) benchmark::DoNotOptimize(ctl.steer(d));
}
BENCHMARK(BM_Steer)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
