#include "afdsim/costmodel.hpp"

#include <algorithm>
#include <cmath>

namespace afd {

namespace {

double group_kv_bytes(const AttentionLayerGroup& g, std::int64_t ctx) {
  switch (g.kind) {
    case AttentionKind::full:
      return static_cast<double>(g.layer_count) * static_cast<double>(ctx) *
             static_cast<double>(g.kv_token_bytes);
    case AttentionKind::windowed:
      return static_cast<double>(g.layer_count) *
             static_cast<double>(std::min(ctx, g.window_len)) *
             static_cast<double>(g.kv_token_bytes);
    case AttentionKind::linear_state:
      return static_cast<double>(g.layer_count) *
             static_cast<double>(g.const_state_bytes);
  }
  return 0.0;
}

double group_core_flops(const AttentionLayerGroup& g, std::int64_t ctx) {
  switch (g.kind) {
    case AttentionKind::full:
    case AttentionKind::windowed: {
      const std::int64_t eff_ctx =
          g.kind == AttentionKind::windowed ? std::min(ctx, g.window_len) : ctx;
      return static_cast<double>(g.layer_count) * 2.0 *
             static_cast<double>(g.n_q_heads) *
             static_cast<double>(g.qk_dim + g.v_dim) *
             static_cast<double>(eff_ctx);
    }
    case AttentionKind::linear_state:
      return static_cast<double>(g.layer_count) *
             static_cast<double>(g.const_flops_per_token);
  }
  return 0.0;
}

}  // namespace

double kv_state_bytes(const ModelSpec& model, const Workload& w) {
  double total = 0.0;
  for (const auto& g : model.attention_groups)
    total += group_kv_bytes(g, w.avg_ctx);
  return total / w.kv_quant_factor;
}

double attn_core_flops(const ModelSpec& model, const Workload& w) {
  double total = 0.0;
  for (const auto& g : model.attention_groups)
    total += group_core_flops(g, w.avg_ctx);
  return total * w.mtp_factor;
}

double attn_linear_flops(const ModelSpec& model) {
  return 2.0 * static_cast<double>(model.attn_linear_params);
}

double attn_linear_flops(const ModelSpec& model, const Workload& w) {
  return attn_linear_flops(model) * w.mtp_factor;
}

double ffn_flops(const ModelSpec& model) {
  return 2.0 * static_cast<double>(model.ffn_activated_params);
}

double ffn_flops(const ModelSpec& model, const Workload& w) {
  return ffn_flops(model) * w.mtp_factor;
}

CostBreakdown cost_breakdown(const ModelSpec& model, const Workload& w) {
  return {kv_state_bytes(model, w), attn_core_flops(model, w),
          attn_linear_flops(model, w), ffn_flops(model, w)};
}

IntensityReport arithmetic_intensity(const ModelSpec& model) {
  return arithmetic_intensity(model, Workload{});
}

IntensityReport arithmetic_intensity(const ModelSpec& model, const Workload& w) {
  IntensityReport rep;
  bool all_full = true;
  for (const auto& g : model.attention_groups) {
    GroupIntensity gi;
    gi.kind = g.kind;
    gi.layer_count = g.layer_count;
    switch (g.kind) {
      case AttentionKind::full:
      case AttentionKind::windowed:
        gi.flops_per_byte = 2.0 * g.n_q_heads * (g.qk_dim + g.v_dim) /
                            (static_cast<double>(g.kv_token_bytes) / w.kv_quant_factor) *
                            w.mtp_factor;
        break;
      case AttentionKind::linear_state:
        gi.flops_per_byte = g.const_state_bytes > 0
                                ? static_cast<double>(g.const_flops_per_token) /
                                      (static_cast<double>(g.const_state_bytes) /
                                       w.kv_quant_factor) * w.mtp_factor
                                : 0.0;
        break;
    }
    if (g.kind != AttentionKind::full) all_full = false;
    rep.groups.push_back(gi);
  }
  if (all_full && rep.groups.size() == 1) rep.scalar = rep.groups.front().flops_per_byte;
  return rep;
}

std::string_view to_string(Binding b) {
  return b == Binding::compute_bound ? "compute_bound" : "memory_bound";
}

UnitCosts unit_costs(const AcceleratorSpec& accel, ComputeKind kind) {
  if (!accel.price_usd_per_hour)
    throw SpecError("accelerator '" + accel.name + "': no price, cannot quote costs");
  const double rate = accel.flops(kind);  // throws for missing 8-bit rate
  const double price = *accel.price_usd_per_hour;
  return {price / (rate * 3600.0), price / (accel.mem_bw * 3600.0)};
}

AttentionCost attention_cost_usd(const ModelSpec& model, const Workload& w,
                                 const AcceleratorSpec& accel) {
  const ComputeKind kind = accel.effective_kind(model.quant.compute_kind);
  const UnitCosts u = unit_costs(accel, kind);
  const double compute = attn_core_flops(model, w) * u.u_flop;
  const double memory = kv_state_bytes(model, w) * u.u_byte;
  AttentionCost c;
  c.binding = memory > compute ? Binding::memory_bound : Binding::compute_bound;
  c.usd_per_1m =
      (std::max(compute, memory) + attn_linear_flops(model, w) * u.u_flop) * 1e6;
  return c;
}

double ffn_cost_usd(const ModelSpec& model, const AcceleratorSpec& accel) {
  return ffn_cost_usd(model, Workload{}, accel);
}

double ffn_cost_usd(const ModelSpec& model, const Workload& w,
                    const AcceleratorSpec& accel) {
  const ComputeKind kind = accel.effective_kind(model.quant.compute_kind);
  const UnitCosts u = unit_costs(accel, kind);
  return ffn_flops(model, w) * u.u_flop * 1e6;
}

std::vector<std::vector<CostCell>> cost_table(
    std::span<const ModelSpec> models, std::span<const AcceleratorSpec> accels,
    const Workload& w) {
  std::vector<std::vector<CostCell>> table(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    table[i].resize(accels.size());
    for (std::size_t j = 0; j < accels.size(); ++j) {
      CostCell& cell = table[i][j];
      try {
        const AttentionCost ac = attention_cost_usd(models[i], w, accels[j]);
        cell.quote = CostQuote{ac.usd_per_1m,
                               ffn_cost_usd(models[i], w, accels[j]), ac.binding};
      } catch (const Error& e) {
        cell.error = e.what();
      }
    }
  }
  return table;
}

}  // namespace afd
