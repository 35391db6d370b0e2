#include <benchmark/benchmark.h>

#include "flatland/develop.hpp"

using namespace flatland;

static void bm_develop_torus(benchmark::State& state) {
  auto t = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  Rat r2(state.range(0), 16);
  for (auto _ : state) {
    auto d = develop_disk(t, r2);
    benchmark::DoNotOptimize(d.cells.size());
  }
}
BENCHMARK(bm_develop_torus)->Arg(9)->Arg(36)->Arg(100);

static void bm_develop_lshape(benchmark::State& state) {
  auto l = lshape_origami();
  Rat r2(state.range(0), 4);
  for (auto _ : state) {
    auto d = develop_disk(l, r2);
    benchmark::DoNotOptimize(d.cells.size());
  }
}
BENCHMARK(bm_develop_lshape)->Arg(4)->Arg(16);

static void bm_immerse_torus(benchmark::State& state) {
  auto t = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  Rat h(state.range(0), 4);
  auto d = rect_complex(rect_union_normalize({Rect(Point(-h, -h), Point(h, h))}));
  for (auto _ : state) {
    auto r = immerse(d, t);
    benchmark::DoNotOptimize(std::holds_alternative<ImmersionMap>(r));
  }
}
BENCHMARK(bm_immerse_torus)->Arg(3)->Arg(5)->Arg(9);

static void bm_embedding_radius(benchmark::State& state) {
  auto l = lshape_origami();
  for (auto _ : state) {
    auto er = embedding_radius(l, 0, Point(Rat(1, 2), Rat(1, 2)));
    benchmark::DoNotOptimize(er.er2.infinite);
  }
}
BENCHMARK(bm_embedding_radius);

BENCHMARK_MAIN();
