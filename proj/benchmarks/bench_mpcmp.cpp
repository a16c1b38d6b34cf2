// Microbenchmarks for the arithmetic substrate and full protocol runs.
// Protocol benchmarks run over the in-memory transport with transcript
// recording off, so they measure computation and message handling, not
// storage.

#include <benchmark/benchmark.h>

#include "mpcmp/protocols.hpp"
#include "mpcmp/runtime.hpp"

namespace {

using namespace mpcmp;

void BM_FieldMul(benchmark::State& state) {
  field::FieldConfig cfg(field::kMersenne61);
  field::Rng rng(1);
  auto a = field::sample_uniform(cfg, rng);
  auto b = field::sample_nonzero(cfg, rng);
  for (auto _ : state) {
    a = field::mul(a, b);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_FieldMul);

void BM_InterpolateAtZero(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  field::FieldConfig cfg(field::kMersenne61);
  field::Rng rng(2);
  std::vector<std::pair<field::FieldElement, field::FieldElement>> pts;
  for (int i = 1; i <= points; ++i)
    pts.emplace_back(field::FieldElement(i, cfg), field::sample_uniform(cfg, rng));
  for (auto _ : state) {
    auto v = field::interpolate_at_zero(pts);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_InterpolateAtZero)->Arg(3)->Arg(5)->Arg(9);

void BM_ShareReconstruct(benchmark::State& state) {
  auto cfg = sharing::make_config(5, 2, field::kMersenne61, 8, 3);
  field::Rng rng(3);
  auto s = field::sample_uniform(cfg.field, rng);
  for (auto _ : state) {
    auto shares = sharing::share_secret(s, cfg, rng);
    benchmark::DoNotOptimize(sharing::reconstruct(shares, cfg));
  }
}
BENCHMARK(BM_ShareReconstruct);

void BM_MulShares(benchmark::State& state) {
  auto cfg = sharing::make_config(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(0) / 2), field::kMersenne61, 8, 4);
  runtime::InMemoryTransport transport(cfg.n);
  runtime::Session session(cfg, transport);
  session.record_messages = false;
  auto x = session.deal(1, field::FieldElement(123, cfg.field), "share");
  auto y = session.deal(2, field::FieldElement(456, cfg.field), "share");
  for (auto _ : state) {
    auto z = mpc::mul_shares(session, x, y);
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_MulShares)->Arg(3)->Arg(5)->Arg(7);

void BM_SecureCompare(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  std::uint64_t seed = 5;
  for (auto _ : state) {
    auto cfg = sharing::make_config(3, 1, field::kMersenne61, l, seed++);
    runtime::InMemoryTransport transport(3);
    runtime::Session session(cfg, transport);
    session.record_messages = false;
    auto outcome = protocols::secure_compare(session, 1, (1ULL << l) - 2, 2, 3);
    benchmark::DoNotOptimize(outcome);
  }
}
BENCHMARK(BM_SecureCompare)->Arg(4)->Arg(8)->Arg(16);

void BM_MaxTournament(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::uint64_t seed = 6;
  std::vector<protocols::OwnedInput> inputs;
  for (int i = 0; i < k; ++i)
    inputs.push_back(protocols::OwnedInput{i % 3 + 1, static_cast<std::uint64_t>(7 * i % 256)});
  for (auto _ : state) {
    auto cfg = sharing::make_config(3, 1, field::kMersenne61, 8, seed++);
    runtime::InMemoryTransport transport(3);
    runtime::Session session(cfg, transport);
    session.record_messages = false;
    auto r = protocols::max_circuit(session, inputs, false);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_MaxTournament)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
