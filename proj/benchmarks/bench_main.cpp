#include <benchmark/benchmark.h>

#include <random>

#include "softsensor/evaluation.hpp"
#include "softsensor/fault_detection.hpp"
#include "softsensor/gmlvq.hpp"
#include "softsensor/pca.hpp"
#include "softsensor/pls.hpp"
#include "softsensor/synthgen.hpp"

using namespace softsensor;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd X(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) X(i, j) = n(rng);
  return X;
}

const synth::GeneratedData& default_data() {
  static const auto data = synth::generate(synth::GeneratorConfig{});
  return data;
}

const LabeledDataset& default_labeled() {
  static const auto d = build_labeled_dataset(default_data().coils, AggregationPolicy::infer(default_data().coils)).data;
  return d;
}

void BM_PlsFit(benchmark::State& state) {
  const auto n = state.range(0);
  const auto X = gaussian(n, 20, 1);
  Eigen::Matrix<double, 3, 2> C;
  C << 1.0, 0.3, 0.5, -0.8, 0.2, 0.1;
  const Eigen::MatrixXd Y = X.leftCols(3) * C + 0.1 * gaussian(n, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pls_fit(X, Y, 2));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PlsFit)->Arg(100)->Arg(10000)->Arg(100000);

void BM_PcaFit(benchmark::State& state) {
  const auto n = state.range(0);
  const auto X = gaussian(n, 20, 3);
  for (auto _ : state) benchmark::DoNotOptimize(pca_fit(X, 5));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PcaFit)->Arg(1000)->Arg(100000);

void BM_StreamScore(benchmark::State& state) {
  const auto model = pls_fit(default_labeled(), 1);
  const auto& coil = default_data().coils.front();
  const StreamConfig cfg{{0.5, 1.0}};
  for (auto _ : state) benchmark::DoNotOptimize(stream_score(model, coil, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(coil.measurements.size()));
}
BENCHMARK(BM_StreamScore);

void BM_LeaveOneCoilOut(benchmark::State& state) {
  const auto& d = default_labeled();
  for (auto _ : state) benchmark::DoNotOptimize(leave_one_coil_out_cv(d, 2));
}
BENCHMARK(BM_LeaveOneCoilOut)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(synth::generate(synth::GeneratorConfig{}));
}
BENCHMARK(BM_Generate)->Unit(benchmark::kMillisecond);

void BM_GmlvqSplits(benchmark::State& state) {
  const auto X = gaussian(32, 20, 4);
  std::vector<int> y(32);
  for (int i = 0; i < 32; ++i) y[static_cast<std::size_t>(i)] = i % 2;
  SplitEvalConfig cfg;
  cfg.n_splits = 20;
  for (auto _ : state) benchmark::DoNotOptimize(repeated_split_auc(X, y, cfg));
}
BENCHMARK(BM_GmlvqSplits)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
