#pragma once

#include <array>
#include <string>
#include <vector>

#include "afdsim/plan.hpp"
#include "afdsim/types.hpp"

namespace afd {

// Per-layer stage durations for one micro-batch: attention on one attention
// instance, each network direction, FFN across the FFN tier.
struct StageTimes {
  std::vector<double> attn;
  std::vector<double> comm_fwd;
  std::vector<double> comm_bwd;
  std::vector<double> ffn;

  int layers() const { return static_cast<int>(attn.size()); }
  void validate() const;  // equal lengths, all >= 0
};

// Maps the cost model onto per-layer times for a concrete plan: per-layer
// roofline max for attention (KV traffic vs core+linear compute) and FFN
// (weight streaming vs compute), payload/bandwidth for the links. Hybrid
// models get heterogeneous attention times.
StageTimes derive_stage_times(const ModelSpec& model, const DeploymentPlan& plan,
                              const Workload& w, const Catalog& catalog);

enum class SimResource : int { attention = 0, fwd_link = 1, ffn = 2, bwd_link = 3 };
std::string_view sim_resource_name(SimResource r);

struct TraceEvent {
  double time = 0.0;  // start, seconds
  SimResource resource = SimResource::attention;
  int layer = 0;
  int micro_batch = 0;
  double duration = 0.0;
};

struct SimResult {
  double tpot = 0.0;  // steady-state period of the measured token step
  double tgs = 0.0;   // total_batch / (tpot * total_gpus)
  std::array<double, 4> utilization{};    // indexed by SimResource
  std::array<double, 4> bubble_fraction{};
  std::vector<TraceEvent> trace;  // measured step, ordered by start time
};

struct SimOptions {
  int token_steps = 3;      // simulate 3, measure the middle one
  bool shared_link = false; // serialize both directions on one link
};

// Deterministic event simulation of the layer-wise pipeline. Resources serve
// micro-batches first-come in (layer, micro_batch) order; micro-batch b
// starts layer l+1 attention only once its layer-l output has returned, and
// its next token step only once layer L has returned.
SimResult simulate(const StageTimes& times, const DeploymentPlan& plan,
                   const SimOptions& opts = {});

// Balanced-pipeline reference: sum over layers of n_micro * the slowest
// stage. The simulator meets it exactly when every layer's stages are equal;
// bubbles from imbalance push the simulated TPOT above it. It is not a hard
// lower bound: profiles whose bottleneck alternates between resources let
// adjacent layers overlap more than the per-layer max accounts for.
double analytic_tpot_bound(const StageTimes& times, const DeploymentPlan& plan);

// CSV export: time_s,resource,layer,micro_batch,stage,duration_s
std::string trace_csv(const SimResult& result);

}  // namespace afd
