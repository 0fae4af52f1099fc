#include "afdsim/pipesim.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "afdsim/costmodel.hpp"

namespace afd {

std::string_view plan_mode_name(PlanMode m) {
  return m == PlanMode::afd ? "afd" : "colocated";
}

DeploymentPlan parse_plan_shape(std::string_view text) {
  // nAmF, e.g. "2A2F" or "16A2F"
  DeploymentPlan plan;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  int n = 0, m = 0;
  auto r1 = std::from_chars(p, end, n);
  if (r1.ec != std::errc() || r1.ptr == end ||
      std::toupper(static_cast<unsigned char>(*r1.ptr)) != 'A')
    throw Error("malformed plan shape '" + std::string(text) + "' (expected nAmF)");
  auto r2 = std::from_chars(r1.ptr + 1, end, m);
  if (r2.ec != std::errc() || r2.ptr + 1 != end ||
      std::toupper(static_cast<unsigned char>(*r2.ptr)) != 'F')
    throw Error("malformed plan shape '" + std::string(text) + "' (expected nAmF)");
  if (n < 1 || m < 1)
    throw Error("plan shape '" + std::string(text) + "' needs at least 1A and 1F");
  plan.attn_instances = n;
  plan.ffn_instances = m;
  plan.mode = PlanMode::afd;
  return plan;
}

void StageTimes::validate() const {
  const std::size_t n = attn.size();
  if (comm_fwd.size() != n || comm_bwd.size() != n || ffn.size() != n)
    throw Error("StageTimes arrays must have equal length");
  for (const auto* v : {&attn, &comm_fwd, &comm_bwd, &ffn})
    for (double t : *v)
      if (!(t >= 0.0)) throw Error("StageTimes entries must be >= 0");
}

std::string_view sim_resource_name(SimResource r) {
  switch (r) {
    case SimResource::attention: return "attention";
    case SimResource::fwd_link: return "fwd_link";
    case SimResource::ffn: return "ffn";
    case SimResource::bwd_link: return "bwd_link";
  }
  return "?";
}

StageTimes derive_stage_times(const ModelSpec& model, const DeploymentPlan& plan,
                              const Workload& w, const Catalog& catalog) {
  if (plan.mode != PlanMode::afd)
    throw Error("stage times are defined for afd plans only");
  const AcceleratorSpec& attn_hw = catalog.accelerator(plan.attn_hw);
  const AcceleratorSpec& ffn_hw = catalog.accelerator(plan.ffn_hw);
  const ComputeKind attn_kind = attn_hw.effective_kind(model.quant.compute_kind);
  const ComputeKind ffn_kind = ffn_hw.effective_kind(model.quant.compute_kind);

  const int L = model.n_layers;
  StageTimes st;
  st.attn.assign(L, 0.0);
  st.comm_fwd.assign(L, 0.0);
  st.comm_bwd.assign(L, 0.0);
  st.ffn.assign(L, 0.0);

  const double mb = static_cast<double>(plan.micro_batch);
  const double samples_per_attn_gpu =
      mb / (static_cast<double>(plan.attn_instances) * attn_hw.gpus_per_server);
  const double ffn_gpus =
      static_cast<double>(plan.ffn_instances) * ffn_hw.gpus_per_server;

  // Linear projections and FFN work are uniform across layers.
  const double linear_flops_per_layer = attn_linear_flops(model, w) / L;
  const double ffn_flops_per_layer = ffn_flops(model, w) / L;
  const double ffn_weight_bytes_per_gpu_layer =
      static_cast<double>(model.ffn_total_weight_bytes) / L / ffn_gpus;

  // Attention groups occupy layer ranges in catalog order.
  int layer = 0;
  for (const auto& g : model.attention_groups) {
    for (int i = 0; i < g.layer_count && layer < L; ++i, ++layer) {
      double kv_bytes = 0.0, core = 0.0;
      switch (g.kind) {
        case AttentionKind::full:
          kv_bytes = static_cast<double>(w.avg_ctx) * g.kv_token_bytes;
          core = 2.0 * g.n_q_heads * (g.qk_dim + g.v_dim) * static_cast<double>(w.avg_ctx);
          break;
        case AttentionKind::windowed:
          kv_bytes = static_cast<double>(std::min(w.avg_ctx, g.window_len)) * g.kv_token_bytes;
          core = 2.0 * g.n_q_heads * (g.qk_dim + g.v_dim) *
                 static_cast<double>(std::min(w.avg_ctx, g.window_len));
          break;
        case AttentionKind::linear_state:
          kv_bytes = static_cast<double>(g.const_state_bytes);
          core = static_cast<double>(g.const_flops_per_token);
          break;
      }
      kv_bytes /= w.kv_quant_factor;
      core *= w.mtp_factor;
      const double mem_time = kv_bytes * samples_per_attn_gpu / attn_hw.mem_bw;
      const double compute_time =
          (core + linear_flops_per_layer) * samples_per_attn_gpu / attn_hw.flops(attn_kind);
      st.attn[layer] = std::max(mem_time, compute_time);
    }
  }

  const double net = ffn_hw.net_bw_per_server * ffn_hw.net_efficiency;
  const double fwd_bytes = mb * model.hidden_dim * model.quant.dispatch_bytes;
  const double bwd_bytes = mb * model.hidden_dim * model.quant.combine_bytes;
  for (int l = 0; l < L; ++l) {
    st.comm_fwd[l] = fwd_bytes / net;
    st.comm_bwd[l] = bwd_bytes / net;
    const double compute_time = ffn_flops_per_layer * mb / (ffn_gpus * ffn_hw.flops(ffn_kind));
    const double weight_time = ffn_weight_bytes_per_gpu_layer / ffn_hw.mem_bw;
    st.ffn[l] = std::max(compute_time, weight_time);
  }
  return st;
}

double analytic_tpot_bound(const StageTimes& times, const DeploymentPlan& plan) {
  times.validate();
  double total = 0.0;
  for (int l = 0; l < times.layers(); ++l) {
    const double comm = std::max(times.comm_fwd[l], times.comm_bwd[l]);
    total += plan.n_micro * std::max({times.attn[l], comm, times.ffn[l]});
  }
  return total;
}

namespace {

constexpr int kStages = 4;  // attention -> fwd link -> ffn -> bwd link

struct Grid {
  int steps, layers, micros;
  // completion[stage][s][l][b]
  std::vector<double> completion;

  double& at(int stage, int s, int l, int b) {
    return completion[((static_cast<std::size_t>(stage) * steps + s) * layers + l) * micros + b];
  }
};

}  // namespace

SimResult simulate(const StageTimes& times, const DeploymentPlan& plan,
                   const SimOptions& opts) {
  times.validate();
  const int L = times.layers();
  const int n = plan.n_micro;
  const int steps = std::max(2, opts.token_steps);
  if (L == 0) throw Error("simulate: empty stage times");
  if (n < 1) throw Error("simulate: n_micro must be >= 1");
  if (plan.mode != PlanMode::afd)
    throw Error("simulate models the disaggregated pipeline; colocated plans have none");

  const double* stage_time[kStages] = {times.attn.data(), times.comm_fwd.data(),
                                       times.ffn.data(), times.comm_bwd.data()};
  const SimResource stage_resource[kStages] = {
      SimResource::attention, SimResource::fwd_link, SimResource::ffn,
      SimResource::bwd_link};

  Grid grid{steps, L, n, std::vector<double>(static_cast<std::size_t>(kStages) * steps * L * n, 0.0)};
  // The fwd and bwd links are independent wires unless shared_link is set,
  // in which case both directions queue on one resource.
  double resource_free[kStages] = {0.0, 0.0, 0.0, 0.0};
  auto free_slot = [&](int stage) -> double& {
    if (opts.shared_link && stage == 3) return resource_free[1];
    return resource_free[stage];
  };

  const int measured = 1;  // middle of three (warm, not cold-started)
  std::vector<TraceEvent> trace;
  std::array<double, 4> busy{};

  // Resources serve tasks in (step, layer, micro) order; within a layer the
  // link carries forward payloads before returns when shared.
  for (int s = 0; s < steps; ++s) {
    for (int l = 0; l < L; ++l) {
      for (int stage = 0; stage < kStages; ++stage) {
        for (int b = 0; b < n; ++b) {
          double ready = 0.0;
          if (stage == 0) {
            if (l > 0)
              ready = grid.at(3, s, l - 1, b);  // layer l-1 returned
            else if (s > 0)
              ready = grid.at(3, s - 1, L - 1, b);  // previous token finished
          } else {
            ready = grid.at(stage - 1, s, l, b);
          }
          double& free = free_slot(stage);
          const double start = std::max(ready, free);
          const double finish = start + stage_time[stage][l];
          free = finish;
          grid.at(stage, s, l, b) = finish;
          if (s == measured) {
            busy[static_cast<int>(stage_resource[stage])] += stage_time[stage][l];
            trace.push_back({start, stage_resource[stage], l, b, stage_time[stage][l]});
          }
        }
      }
    }
  }

  auto step_completion = [&](int s) {
    double c = 0.0;
    for (int b = 0; b < n; ++b) c = std::max(c, grid.at(3, s, L - 1, b));
    return c;
  };

  SimResult res;
  res.tpot = step_completion(measured) - step_completion(measured - 1);
  if (plan.total_gpus > 0 && res.tpot > 0.0)
    res.tgs = static_cast<double>(plan.total_batch) /
              (res.tpot * static_cast<double>(plan.total_gpus));
  for (int r = 0; r < 4; ++r) {
    res.utilization[r] = res.tpot > 0.0 ? busy[r] / res.tpot : 0.0;
    res.bubble_fraction[r] = 1.0 - res.utilization[r];
  }
  std::stable_sort(trace.begin(), trace.end(), [](const TraceEvent& a, const TraceEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.layer != b.layer) return a.layer < b.layer;
    if (a.micro_batch != b.micro_batch) return a.micro_batch < b.micro_batch;
    return static_cast<int>(a.resource) < static_cast<int>(b.resource);
  });
  res.trace = std::move(trace);
  return res;
}

std::string trace_csv(const SimResult& result) {
  auto stage_label = [](SimResource r) -> std::string_view {
    switch (r) {
      case SimResource::attention: return "attention";
      case SimResource::fwd_link: return "comm";
      case SimResource::ffn: return "ffn";
      case SimResource::bwd_link: return "comm";
    }
    return "?";
  };
  std::ostringstream os;
  os << "time_s,resource,layer,micro_batch,stage,duration_s\n";
  char buf[64];
  for (const auto& ev : result.trace) {
    std::snprintf(buf, sizeof(buf), "%.9f", ev.time);
    os << buf << ',' << sim_resource_name(ev.resource) << ',' << ev.layer << ','
       << ev.micro_batch << ',' << stage_label(ev.resource) << ',';
    std::snprintf(buf, sizeof(buf), "%.9f", ev.duration);
    os << buf << '\n';
  }
  return os.str();
}

}  // namespace afd
