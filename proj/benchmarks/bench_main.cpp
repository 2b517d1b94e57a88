#include <benchmark/benchmark.h>

#include "canonconn/exactla.hpp"
#include "canonconn/frames.hpp"
#include "canonconn/normalize.hpp"
#include "fixtures.hpp"

using namespace canonconn;

static void BM_Rref(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = frac(static_cast<long>((i * 7 + j * 3) % 11) - 5, static_cast<long>(1 + (i + j) % 3));
  for (auto _ : state) benchmark::DoNotOptimize(rref(m));
}
BENCHMARK(BM_Rref)->Arg(16)->Arg(48);

static CarnotSpec spec_for(int i) { return fixtures::all().at(static_cast<std::size_t>(i)).second; }

static void BM_BuildComplex(benchmark::State& state) {
  auto spec = spec_for(static_cast<int>(state.range(0)));
  state.SetLabel(fixtures::all().at(static_cast<std::size_t>(state.range(0))).first);
  for (auto _ : state) benchmark::DoNotOptimize(Complex(ExtendedAlgebra::extend(CarnotAlgebra::build(spec))));
}
BENCHMARK(BM_BuildComplex)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

static void BM_SolveAlpha1(benchmark::State& state) {
  auto spec = spec_for(static_cast<int>(state.range(0)));
  state.SetLabel(fixtures::all().at(static_cast<std::size_t>(state.range(0))).first);
  Complex cx(ExtendedAlgebra::extend(CarnotAlgebra::build(spec)));
  Normalizer nz(cx);
  Mat basis = nz.valid_inputs();
  Cochain kt = zero_cochain(cx, 2);
  for (std::size_t r = 0; r < basis.rows(); ++r)
    for (std::size_t c = 0; c < basis.cols(); ++c) kt.coeffs[nz.inputs()[r]] += frac(static_cast<long>(c % 5) - 2, 3) * basis(r, c);
  for (auto _ : state) benchmark::DoNotOptimize(nz.solve_alpha1(kt));
}
BENCHMARK(BM_SolveAlpha1)->DenseRange(0, 5)->Unit(benchmark::kMicrosecond);

static void BM_SolveCanonicalHeisenberg(benchmark::State& state) {
  Complex cx(ExtendedAlgebra::extend(CarnotAlgebra::build(fixtures::heisenberg23())));
  FrameModel m;
  m.dim = 3;
  m.fields = {{parse_poly("1", 3), parse_poly("0", 3), parse_poly("0", 3)},
              {parse_poly("0", 3), parse_poly("1", 3), parse_poly("x1 + x1*x2", 3)}};
  m.point = {0, 0, 0};
  const auto degree = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_canonical(cx, m, degree));
}
BENCHMARK(BM_SolveCanonicalHeisenberg)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_JetProduct(benchmark::State& state) {
  const auto nvars = static_cast<std::size_t>(state.range(0));
  auto basis = MonomialBasis::get(nvars, 6);
  Poly f = parse_poly("1", nvars), g = parse_poly("1", nvars);
  for (std::size_t v = 1; v <= nvars; ++v) {
    f = f + parse_poly("x" + std::to_string(v) + "^2", nvars);
    g = g + parse_poly("x" + std::to_string(v), nvars);
  }
  Vec p(nvars);
  Jet a = Jet::from_poly(basis, f * g, p), b = Jet::from_poly(basis, g * g * g, p);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetProduct)->Arg(3)->Arg(5)->Arg(10);

BENCHMARK_MAIN();
