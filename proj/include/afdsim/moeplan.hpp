#pragma once

#include <cstdint>

#include "afdsim/types.hpp"

namespace afd {

// Smallest batch that makes a dense FFN compute-bound on this hardware,
// assuming 8-bit weight storage: 2*B >= flops/mem_bw.
std::int64_t b_dense(const AcceleratorSpec& accel, ComputeKind kind);

// Batch needed for the same MFU on a sparse MoE: b_dense scaled by 1/S.
std::int64_t b_moe(const AcceleratorSpec& accel, const ModelSpec& model);

// Dispatch + combine traffic for one FFN layer at the given batch.
double ffn_net_bytes(const ModelSpec& model, std::int64_t batch);

struct SparsityReport {
  std::int64_t b_dense = 0;
  std::int64_t b_moe = 0;
  double net_bytes_per_layer = 0.0;  // at b_moe
  double s_min = 0.0;                // sparsest MoE this hardware sustains
  bool feasible = false;             // model.moe_sparsity >= s_min
};

// Minimum viable sparsity: the network must move 3*H bytes per token per
// layer within its share of the pipeline budget while the FFN stays
// compute-bound. Only derived for 3-stage pipelines; throws otherwise.
SparsityReport min_sparsity(const AcceleratorSpec& accel, const ModelSpec& model,
                            const Workload& w);

}  // namespace afd
