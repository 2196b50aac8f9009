#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "magtor/magtor.hpp"

namespace {

using namespace magtor;

IntMatrix skew_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry(-10, 10);
  while (true) {
    IntMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        w(i, j) = entry(rng);
        w(j, i) = -w(i, j);
      }
    }
    if (determinant(w) != 0) return w;
  }
}

void BM_NormalForm(benchmark::State& state) {
  const SymplecticGram omega(skew_matrix(static_cast<std::size_t>(state.range(0)), 7));
  for (auto _ : state) benchmark::DoNotOptimize(chern_invariant_factors(omega));
}
BENCHMARK(BM_NormalForm)->Arg(2)->Arg(4)->Arg(6)->Arg(10);

void BM_SpectralSignature(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RatMatrix h = RatMatrix::identity(n);
  for (std::size_t i = 0; i + 1 < n; ++i) h(i, i + 1) = h(i + 1, i) = Rational(1, 3);
  const TorusMagneticSystem sys{MetricGram(h), SymplecticGram(skew_matrix(n, 11))};
  for (auto _ : state) benchmark::DoNotOptimize(spectral_signature(sys));
}
BENCHMARK(BM_SpectralSignature)->Arg(2)->Arg(4)->Arg(6);

void BM_LandauSpectrum(benchmark::State& state) {
  const SpectralSignature sig{3, {0.7, 1.3, 2.9}, 6.0};
  const double cutoff = static_cast<double>(state.range(0)) * std::numbers::pi;
  for (auto _ : state) benchmark::DoNotOptimize(landau_spectrum(sig, 2, cutoff));
}
BENCHMARK(BM_LandauSpectrum)->Arg(25)->Arg(100)->Arg(400);

void BM_LengthSpectrum(benchmark::State& state) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4);
  g(0, 1) = g(1, 0) = 0.4;
  g(2, 3) = g(3, 2) = -0.3;
  const auto bound = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(length_spectrum(g, bound, 1000000));
}
BENCHMARK(BM_LengthSpectrum)->Arg(4)->Arg(16)->Arg(64);

void BM_Flow(benchmark::State& state) {
  const TorusMagneticSystem sys{MetricGram(RatMatrix::identity(4)), SymplecticGram(skew_matrix(4, 3))};
  const MagneticFlow flow(sys);
  const CotangentState x{Eigen::Vector4d(0.1, 0.2, 0.3, 0.4), Eigen::Vector4d(1.0, -0.5, 0.25, 2.0)};
  for (auto _ : state) benchmark::DoNotOptimize(flow(x, 7.5));
}
BENCHMARK(BM_Flow);

}  // namespace

BENCHMARK_MAIN();
