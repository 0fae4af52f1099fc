// Compares the OpenMP plan-search kernel against the serial reference on a
// search grid large enough to measure, and checks they agree.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "afdsim/catalog.hpp"
#include "afdsim/planner.hpp"

using namespace afd;

namespace {

double time_one(const ModelSpec& model, const Workload& w, const Catalog& cat,
                const SearchOptions& opts, bool parallel, std::size_t* plans_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto plans = parallel ? search_plans(model, w, cat, opts)
                              : search_plans_serial(model, w, cat, opts);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  *plans_out = plans.size();
  return secs;
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  const Catalog cat = builtin_catalog();

  SearchOptions opts;
  opts.max_attn_instances = 64;
  opts.max_ffn_instances = 32;
  opts.micro_batch_step = 256;
  opts.max_micro_batch = 8192;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-18s %10s %10s %8s %8s\n", "model", "serial_s", "openmp_s",
              "speedup", "plans");

  for (const char* name : {"step3", "dsv3", "qwen3-moe"}) {
    const ModelSpec& m = cat.model(name);
    Workload w;
    double serial_best = 1e300, parallel_best = 1e300;
    std::size_t n_serial = 0, n_parallel = 0;
    for (int r = 0; r < repeats; ++r) {
      serial_best = std::min(serial_best, time_one(m, w, cat, opts, false, &n_serial));
      parallel_best = std::min(parallel_best, time_one(m, w, cat, opts, true, &n_parallel));
    }
    if (n_serial != n_parallel) {
      std::printf("MISMATCH for %s: serial %zu plans vs parallel %zu\n", name,
                  n_serial, n_parallel);
      return 1;
    }
    std::printf("%-18s %10.4f %10.4f %7.2fx %8zu\n", name, serial_best, parallel_best,
                serial_best / parallel_best, n_serial);
  }
  return 0;
}
