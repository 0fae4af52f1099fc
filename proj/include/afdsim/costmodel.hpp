#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afdsim/types.hpp"

namespace afd {

// Per-token decoding cost split: KV/state traffic for the attention core,
// attention core FLOPs, linear-projection FLOPs around attention, FFN FLOPs.
struct CostBreakdown {
  double kv_state_bytes = 0.0;
  double attn_core_flops = 0.0;
  double attn_linear_flops = 0.0;
  double ffn_flops = 0.0;
};

double kv_state_bytes(const ModelSpec& model, const Workload& w);
double attn_core_flops(const ModelSpec& model, const Workload& w);
double attn_linear_flops(const ModelSpec& model);
double attn_linear_flops(const ModelSpec& model, const Workload& w);
double ffn_flops(const ModelSpec& model);
double ffn_flops(const ModelSpec& model, const Workload& w);
CostBreakdown cost_breakdown(const ModelSpec& model, const Workload& w);

struct GroupIntensity {
  AttentionKind kind;
  int layer_count;
  double flops_per_byte;  // context-independent per attention design
};

struct IntensityReport {
  // Set when every group is plain full attention (single-family model).
  std::optional<double> scalar;
  std::vector<GroupIntensity> groups;
};

IntensityReport arithmetic_intensity(const ModelSpec& model);
IntensityReport arithmetic_intensity(const ModelSpec& model, const Workload& w);

struct UnitCosts {
  double u_flop;  // USD per FLOP
  double u_byte;  // USD per byte of memory traffic
};

// Throws SpecError if the accelerator has no price or no rate for `kind`.
UnitCosts unit_costs(const AcceleratorSpec& accel, ComputeKind kind);

enum class Binding { compute_bound, memory_bound };
std::string_view to_string(Binding b);

struct AttentionCost {
  double usd_per_1m;
  Binding binding;  // which arm of the attention-core max won
};

// Attention tier: max(core FLOP cost, KV traffic cost) + linear FLOP cost.
// Hardware without a native 8-bit rate charges FLOPs at the 16-bit rate
// while keeping the model's 8-bit storage traffic.
AttentionCost attention_cost_usd(const ModelSpec& model, const Workload& w,
                                 const AcceleratorSpec& accel);

// FFN tier is assumed compute-bound under disaggregation: pure FLOP cost.
double ffn_cost_usd(const ModelSpec& model, const AcceleratorSpec& accel);
double ffn_cost_usd(const ModelSpec& model, const Workload& w,
                    const AcceleratorSpec& accel);

struct CostQuote {
  double attn_usd_per_1m = 0.0;
  double ffn_usd_per_1m = 0.0;
  Binding binding_constraint = Binding::compute_bound;
};

struct CostCell {
  std::optional<CostQuote> quote;
  std::string error;  // set when the cell is not quotable (e.g. no price)
};

// Cartesian model x accelerator evaluation; error cells are preserved.
std::vector<std::vector<CostCell>> cost_table(
    std::span<const ModelSpec> models, std::span<const AcceleratorSpec> accels,
    const Workload& w);

}  // namespace afd
