#pragma once

#include <span>
#include <string>
#include <vector>

#include "afdsim/costmodel.hpp"
#include "afdsim/plan.hpp"
#include "afdsim/types.hpp"

namespace afd {

struct AfdQuote {
  std::string attn_hw;
  std::string ffn_hw;
  double attn_usd_per_1m = 0.0;
  double ffn_usd_per_1m = 0.0;
  double total_usd_per_1m = 0.0;
};

// Cheapest hardware for each tier independently; communication is assumed
// fully overlapped by the pipeline. Accelerators without a price are skipped.
// strict_sparsity additionally requires the FFN hardware to sustain the
// model's sparsity at high MFU.
AfdQuote best_afd_quote(const ModelSpec& model, const Workload& w,
                        std::span<const AcceleratorSpec> accels,
                        bool strict_sparsity = false);

struct ColocatedQuote {
  std::string hw;
  double total_usd_per_1m = 0.0;
};

// Both tiers on one hardware: sum of the two cost columns, minimized over it.
ColocatedQuote best_colocated_quote(const ModelSpec& model, const Workload& w,
                                    std::span<const AcceleratorSpec> accels);

// Grow the attention tier for a longer average context: instances scale by
// new_ctx/base_ctx (ceiling), total batch and per-instance KV load stay
// fixed, TGS rescales by the GPU-count ratio.
DeploymentPlan scale_attention(const DeploymentPlan& base, std::int64_t base_ctx,
                               std::int64_t new_ctx);

// Feasibility flags: FFN-hardware sparsity floor, per-layer network budget,
// per-layer attention/FFN stage budget.
PlanFlags vet_plan(const DeploymentPlan& plan, const ModelSpec& model,
                   const Workload& w, const Catalog& catalog);

// SLA-floor throughput: total_batch / (tpot_sla * total GPUs).
double predicted_tgs(const DeploymentPlan& plan, const Workload& w);

// Largest micro-batch (multiples of 1024) whose per-layer dispatch+combine
// traffic fits the communication budget on this FFN hardware.
std::int64_t max_micro_batch(const ModelSpec& model, const AcceleratorSpec& ffn_hw,
                             const Workload& w);

struct SearchOptions {
  bool strict_sparsity = false;  // drop plans whose FFN hw cannot batch the MoE
  int max_attn_instances = 32;
  int max_ffn_instances = 8;
  std::int64_t micro_batch_step = 1024;
  std::int64_t max_micro_batch = 8192;
  bool parallel = true;  // OpenMP evaluation; results are order-independent
};

// Exhaustive enumeration over mode x hardware pair x instance counts x
// micro-batch grid, each candidate vetted and costed. Deterministic order:
// cost, then descending TGS, then names/shape.
std::vector<DeploymentPlan> search_plans(const ModelSpec& model, const Workload& w,
                                         const Catalog& catalog,
                                         const SearchOptions& opts = {});

// Single-threaded reference of the same search, kept for testing the
// parallel kernel against.
std::vector<DeploymentPlan> search_plans_serial(const ModelSpec& model,
                                                const Workload& w,
                                                const Catalog& catalog,
                                                const SearchOptions& opts = {});

struct ParetoPoint {
  std::string model;
  std::int64_t activated_params = 0;
  double best_usd_per_1m = 0.0;
  AfdQuote quote;
  ColocatedQuote colocated;
  bool on_frontier = false;  // not dominated in (activated_params, cost)
};

// Per-model best quote over all plans, with frontier marking. With
// strict_sparsity unset, over-sparse models keep their idealized quotes.
std::vector<ParetoPoint> pareto(std::span<const ModelSpec> models, const Workload& w,
                                const Catalog& catalog, bool strict_sparsity = false);

}  // namespace afd
