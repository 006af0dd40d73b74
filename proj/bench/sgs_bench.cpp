// Schedule generator variants against the serial reference decoder, and the
// OpenMP rollout sampler at different thread counts.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>

#include "mrcmpsp/bench.hpp"
#include "mrcmpsp/constructor.hpp"
#include "mrcmpsp/instance_io.hpp"
#include "mrcmpsp/reference_sgs.hpp"
#include "mrcmpsp/synthetic.hpp"

namespace {

using namespace mrcmpsp;

const Instance& instance_for(const std::string& name) {
  static std::map<std::string, Instance> cache;
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  for (const auto& recipe : table_recipes()) {
    if (recipe.name != name) continue;
    GeneratedFiles files = generate_container(recipe, 20140707);
    auto resolver = [&](const std::string& path) {
      for (const auto& [file, text] : files.projects)
        if (file == path) return text;
      throw std::runtime_error("missing " + path);
    };
    return cache.emplace(name, parse_multiproject(files.container, resolver)).first->second;
  }
  throw std::runtime_error("unknown recipe " + name);
}

const std::vector<SequenceSolution>& trace_for(const std::string& name) {
  static std::map<std::string, std::vector<SequenceSolution>> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, move_trace(instance_for(name), 1, 500)).first;
  return it->second;
}

void BM_reference(benchmark::State& state, std::string name) {
  const Instance& inst = instance_for(name);
  const auto& trace = trace_for(name);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference_decode(inst, trace[i]).tms);
    i = (i + 1) % trace.size();
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_variant(benchmark::State& state, std::string name, int variant) {
  const Instance& inst = instance_for(name);
  const auto& trace = trace_for(name);
  const DecodeOptions options = bench_variants()[variant].options;
  GeneratorWorkspace ws(inst);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ws.decode(trace[i], options).tms);
    i = (i + 1) % trace.size();
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_construct(benchmark::State& state, std::string name) {
  const Instance& inst = instance_for(name);
  const int threads = static_cast<int>(state.range(0));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(threads);
  ConstructorConfig config;
  config.candidates = 10;
  config.rollouts = 40;
  for (auto _ : state) benchmark::DoNotOptimize(construct(inst, 7, config).best_f);
  omp_set_num_threads(saved);
  state.counters["threads"] = threads;
}

void register_all() {
  for (std::string name : {"A-5", "B-9"}) {
    benchmark::RegisterBenchmark(("reference/" + name).c_str(), BM_reference, name);
    const auto variants = bench_variants();
    for (int v = 0; v < static_cast<int>(variants.size()); ++v)
      benchmark::RegisterBenchmark((variants[v].name + "/" + name).c_str(), BM_variant, name, v);
    auto* b = benchmark::RegisterBenchmark(("construct/" + name).c_str(), BM_construct, name);
    b->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
    if (omp_get_num_procs() > 1) b->Arg(omp_get_num_procs());
  }
}

}  // namespace

int main(int argc, char** argv) {
  register_all();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
