#pragma once

#include <cstdint>
#include <string>

namespace afd {

enum class PlanMode { afd, colocated };

std::string_view plan_mode_name(PlanMode m);

struct PlanFlags {
  bool sparsity_ok = false;
  bool net_ok = false;
  bool stage_ok = false;
  bool relies_on_large_ep = false;  // kept only under the lenient sparsity setting
};

// An nA-mF deployment: n attention servers and m FFN servers. micro_batch is
// the slice occupying one pipeline slot across the whole attention tier, so
// total_batch = micro_batch * n_micro.
struct DeploymentPlan {
  std::string attn_hw;
  int attn_instances = 1;
  std::string ffn_hw;
  int ffn_instances = 1;
  std::int64_t micro_batch = 0;
  int n_micro = 3;  // equals the pipeline stage count
  std::int64_t total_batch = 0;
  int total_gpus = 0;
  PlanMode mode = PlanMode::afd;
  PlanFlags flags;
  double predicted_tgs = 0.0;
  double theoretical_usd_per_1m = 0.0;
};

// "2A2F" -> (2, 2). Throws afd::Error on malformed input.
DeploymentPlan parse_plan_shape(std::string_view text);

}  // namespace afd
