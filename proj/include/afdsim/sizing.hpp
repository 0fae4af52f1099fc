#pragma once

#include <cstdint>
#include <string>

#include "afdsim/types.hpp"

namespace afd {

struct SizingReport {
  double stage_budget = 0.0;       // seconds per layer
  // attention side
  double attn_bytes_budget = 0.0;  // bytes one device can move per layer slot
  double linear_weight_bytes = 0.0;
  double kv_budget = 0.0;          // bytes left for KV after linear weights
  double max_ctx_tokens = 0.0;     // total context across the whole batch
  std::int64_t max_batch = 0;      // concurrent requests at workload.avg_ctx
  // FFN side
  double ffn_bytes_per_device = 0.0;
  int servers_needed = 0;
  bool feasible = false;
  std::string reason;  // set when infeasible
};

// Per-layer time slice: tpot / pipeline_stages / n_layers.
double stage_budget(const Workload& w, const ModelSpec& model);

// How much KV one device can serve per layer slot once the attention linear
// weights are read, and the total context that fits in it.
// linear_weight_bytes defaults to the flagship model's per-device linears
// under the usual tensor-parallel layout.
SizingReport attention_capacity(const AcceleratorSpec& accel, const ModelSpec& model,
                                const Workload& w,
                                double linear_weight_bytes = 6.7e7);

// Servers needed so every FFN layer's weights stream within the layer slot
// at bw_fraction of peak bandwidth (leaving the rest for activations).
SizingReport ffn_servers_needed(const AcceleratorSpec& accel, const ModelSpec& model,
                                const Workload& w, double bw_fraction = 0.5);

}  // namespace afd
