#include "afdsim/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace afd {

double stage_budget(const Workload& w, const ModelSpec& model) {
  return w.tpot_sla / w.pipeline_stages / model.n_layers;
}

namespace {

// Bytes of KV/state appended-or-read per token, averaged per layer.
double kv_bytes_per_token_per_layer(const ModelSpec& model) {
  double total = 0.0;
  for (const auto& g : model.attention_groups) {
    if (g.kind == AttentionKind::linear_state) continue;  // no per-token growth
    total += static_cast<double>(g.layer_count) *
             static_cast<double>(g.kv_token_bytes);
  }
  return total / model.n_layers;
}

}  // namespace

SizingReport attention_capacity(const AcceleratorSpec& accel, const ModelSpec& model,
                                const Workload& w, double linear_weight_bytes) {
  SizingReport rep;
  rep.stage_budget = stage_budget(w, model);
  rep.attn_bytes_budget = accel.mem_bw * rep.stage_budget;
  rep.linear_weight_bytes = linear_weight_bytes;
  rep.kv_budget = rep.attn_bytes_budget - linear_weight_bytes;
  if (rep.kv_budget <= 0.0) {
    rep.kv_budget = 0.0;
    rep.feasible = false;
    rep.reason = "linear weights exceed per-layer byte budget";
    return rep;
  }
  const double per_token = kv_bytes_per_token_per_layer(model);
  if (per_token <= 0.0) {
    rep.feasible = true;
    rep.max_ctx_tokens = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.max_ctx_tokens = rep.kv_budget / per_token;
  rep.max_batch = static_cast<std::int64_t>(
      std::floor(rep.max_ctx_tokens / static_cast<double>(w.avg_ctx)));
  rep.feasible = rep.max_batch >= 1;
  if (!rep.feasible) rep.reason = "no room for even one request at avg_ctx";
  return rep;
}

SizingReport ffn_servers_needed(const AcceleratorSpec& accel, const ModelSpec& model,
                                const Workload& w, double bw_fraction) {
  SizingReport rep;
  rep.stage_budget = stage_budget(w, model);
  rep.ffn_bytes_per_device =
      accel.mem_bw * bw_fraction * rep.stage_budget * model.n_layers;
  const double per_server = rep.ffn_bytes_per_device * accel.gpus_per_server;
  const double want = static_cast<double>(model.ffn_total_weight_bytes);
  rep.servers_needed = static_cast<int>(
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(want / per_server))));
  rep.feasible = true;
  return rep;
}

}  // namespace afd
