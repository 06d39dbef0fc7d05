// Serial reference vs OpenMP kernel, side by side for each parallel kernel.
#include <benchmark/benchmark.h>

#include "radomult/bounds.hpp"
#include "radomult/certificate.hpp"
#include "radomult/sdpgen.hpp"

using namespace radomult;

namespace {

std::string data(const std::string& rel) { return std::string(RADOMULT_DATA_DIR) + "/" + rel; }

void enumerate_with(benchmark::State& state, EnumerationStrategy strategy) {
  EnumerationOptions o;
  o.strategy = strategy;
  const int q = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const int c = static_cast<int>(state.range(2));
  std::size_t classes = 0;
  for (auto _ : state) classes = enumerate_colorings(q, n, c, -1, o).size();
  state.counters["classes"] = static_cast<double>(classes);
}

void BM_EnumerateSweepSerial(benchmark::State& s) { enumerate_with(s, EnumerationStrategy::OrbitSweep); }
void BM_EnumerateScanParallel(benchmark::State& s) { enumerate_with(s, EnumerationStrategy::MinimalityScan); }
BENCHMARK(BM_EnumerateSweepSerial)->Args({3, 2, 3})->Args({2, 4, 2})->Args({5, 2, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateScanParallel)->Args({3, 2, 3})->Args({2, 4, 2})->Args({5, 2, 2})->Unit(benchmark::kMillisecond);

struct CertCase {
  SosCertificate cert;
  ColoringFamily family;
};

const CertCase& cert_case(int which) {
  static const CertCase ap3{read_certificate_file(data("certificates/3ap_q3_c3.cert")), enumerate_colorings(3, 2, 3, -1)};
  static const CertCase ap4{read_certificate_file(data("certificates/4ap_q5_c2.cert")), enumerate_colorings(5, 2, 2, -1)};
  return which == 0 ? ap3 : ap4;
}

void verify_with(benchmark::State& state, bool serial) {
  const auto& cc = cert_case(static_cast<int>(state.range(0)));
  VerifyOptions o;
  o.serial = serial;
  for (auto _ : state) benchmark::DoNotOptimize(verify(cc.cert, cc.family, o).pass);
}

void BM_VerifySerial(benchmark::State& s) { verify_with(s, true); }
void BM_VerifyParallel(benchmark::State& s) { verify_with(s, false); }
BENCHMARK(BM_VerifySerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

const Coloring& ap_coloring() {
  static const Coloring g = read_coloring_file(data("constructions/ap_q5_n3_c2.col")).coloring;
  return g;
}

void BM_DegenerateProfileSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(degenerate_profile_serial(ap_coloring(), -1, 1).maps);
}
void BM_DegenerateProfileParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(degenerate_profile(ap_coloring(), -1, 1).maps);
}
BENCHMARK(BM_DegenerateProfileSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DegenerateProfileParallel)->Unit(benchmark::kMillisecond);

void assemble_with(benchmark::State& state, bool serial) {
  static const ParameterSpec spec(builtin_system("schur", 2), 3);
  static const ColoringFamily fam = enumerate_colorings(2, 3, 3, 0);
  AssembleOptions o;
  o.serial = serial;
  for (auto _ : state) benchmark::DoNotOptimize(assemble(spec, fam, o).constraints.size());
}

void BM_AssembleSerial(benchmark::State& s) { assemble_with(s, true); }
void BM_AssembleParallel(benchmark::State& s) { assemble_with(s, false); }
BENCHMARK(BM_AssembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
