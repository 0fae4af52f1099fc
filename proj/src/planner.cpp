#include "afdsim/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "afdsim/moeplan.hpp"
#include "afdsim/pipesim.hpp"
#include "afdsim/sizing.hpp"

namespace afd {

namespace {

bool quotable(const AcceleratorSpec& a) { return a.price_usd_per_hour.has_value(); }

bool sparsity_feasible(const ModelSpec& model, const Workload& w,
                       const AcceleratorSpec& accel) {
  return min_sparsity(accel, model, w).feasible;
}

}  // namespace

AfdQuote best_afd_quote(const ModelSpec& model, const Workload& w,
                        std::span<const AcceleratorSpec> accels,
                        bool strict_sparsity) {
  AfdQuote best;
  double best_attn = std::numeric_limits<double>::infinity();
  double best_ffn = std::numeric_limits<double>::infinity();
  for (const auto& a : accels) {
    if (!quotable(a)) continue;
    const double attn = attention_cost_usd(model, w, a).usd_per_1m;
    if (attn < best_attn) {
      best_attn = attn;
      best.attn_hw = a.name;
    }
    if (strict_sparsity && !sparsity_feasible(model, w, a)) continue;
    const double ffn = ffn_cost_usd(model, w, a);
    if (ffn < best_ffn) {
      best_ffn = ffn;
      best.ffn_hw = a.name;
    }
  }
  if (best.attn_hw.empty() || best.ffn_hw.empty())
    throw Error("no priced accelerator can serve model '" + model.name + "'" +
                (strict_sparsity ? " under strict sparsity" : ""));
  best.attn_usd_per_1m = best_attn;
  best.ffn_usd_per_1m = best_ffn;
  best.total_usd_per_1m = best_attn + best_ffn;
  return best;
}

ColocatedQuote best_colocated_quote(const ModelSpec& model, const Workload& w,
                                    std::span<const AcceleratorSpec> accels) {
  ColocatedQuote best;
  double best_total = std::numeric_limits<double>::infinity();
  for (const auto& a : accels) {
    if (!quotable(a)) continue;
    const double total =
        attention_cost_usd(model, w, a).usd_per_1m + ffn_cost_usd(model, w, a);
    if (total < best_total) {
      best_total = total;
      best.hw = a.name;
    }
  }
  if (best.hw.empty())
    throw Error("no priced accelerator can serve model '" + model.name + "'");
  best.total_usd_per_1m = best_total;
  return best;
}

DeploymentPlan scale_attention(const DeploymentPlan& base, std::int64_t base_ctx,
                               std::int64_t new_ctx) {
  if (base_ctx < 1 || new_ctx < 1)
    throw Error("scale_attention: contexts must be >= 1");
  DeploymentPlan scaled = base;
  const double ratio = static_cast<double>(new_ctx) / static_cast<double>(base_ctx);
  scaled.attn_instances =
      static_cast<int>(std::ceil(base.attn_instances * ratio - 1e-12));
  if (base.total_gpus > 0 && base.attn_instances > 0) {
    const int gps_attn = base.total_gpus /
                         (base.attn_instances + base.ffn_instances);
    scaled.total_gpus = base.total_gpus +
                        (scaled.attn_instances - base.attn_instances) * gps_attn;
    scaled.predicted_tgs = base.predicted_tgs *
                           static_cast<double>(base.total_gpus) /
                           static_cast<double>(scaled.total_gpus);
  }
  return scaled;
}

double predicted_tgs(const DeploymentPlan& plan, const Workload& w) {
  if (plan.total_gpus < 1) throw Error("predicted_tgs: plan has no GPUs");
  return static_cast<double>(plan.total_batch) /
         (w.tpot_sla * static_cast<double>(plan.total_gpus));
}

std::int64_t max_micro_batch(const ModelSpec& model, const AcceleratorSpec& ffn_hw,
                             const Workload& w) {
  const double budget = w.tpot_sla / w.pipeline_stages;
  const double net = ffn_hw.net_bw_per_server * ffn_hw.net_efficiency;
  const double limit = net * budget /
                       (static_cast<double>(model.quant.dispatch_bytes +
                                            model.quant.combine_bytes) *
                        model.hidden_dim * model.n_layers);
  const std::int64_t step = 1024;
  const std::int64_t grid = static_cast<std::int64_t>(std::floor(limit / step)) * step;
  return std::max<std::int64_t>(0, grid);
}

PlanFlags vet_plan(const DeploymentPlan& plan, const ModelSpec& model,
                   const Workload& w, const Catalog& catalog) {
  PlanFlags flags;
  const AcceleratorSpec& ffn_hw = catalog.accelerator(plan.ffn_hw);

  flags.sparsity_ok = sparsity_feasible(model, w, ffn_hw);
  flags.relies_on_large_ep = !flags.sparsity_ok;

  // Expert-parallel traffic crosses the network in either mode: dispatch and
  // combine for every token of the micro-batch, per layer, within the
  // communication share of the pipeline.
  const double comm_budget = w.tpot_sla / w.pipeline_stages;
  const double net = ffn_hw.net_bw_per_server * ffn_hw.net_efficiency;
  flags.net_ok =
      ffn_net_bytes(model, plan.micro_batch) * model.n_layers / net <= comm_budget;

  if (plan.mode == PlanMode::afd) {
    const double budget = stage_budget(w, model);
    const StageTimes st = derive_stage_times(model, plan, w, catalog);
    flags.stage_ok = true;
    for (int l = 0; l < st.layers(); ++l)
      if (st.attn[l] > budget || st.ffn[l] > budget) flags.stage_ok = false;
  } else {
    flags.stage_ok = true;  // no layer-wise A/F pipeline to budget
  }
  return flags;
}

namespace {

struct Candidate {
  PlanMode mode;
  int attn_hw_idx;
  int ffn_hw_idx;
  int attn_instances;
  int ffn_instances;
  std::int64_t micro_batch;
};

DeploymentPlan evaluate(const Candidate& c, const ModelSpec& model,
                        const Workload& w, const Catalog& catalog,
                        std::span<const AcceleratorSpec> priced) {
  const AcceleratorSpec& ah = priced[c.attn_hw_idx];
  const AcceleratorSpec& fh = priced[c.ffn_hw_idx];
  DeploymentPlan plan;
  plan.mode = c.mode;
  plan.attn_hw = ah.name;
  plan.ffn_hw = fh.name;
  plan.attn_instances = c.attn_instances;
  plan.ffn_instances = c.ffn_instances;
  plan.micro_batch = c.micro_batch;
  plan.n_micro = w.pipeline_stages;
  plan.total_batch = plan.micro_batch * plan.n_micro;
  plan.total_gpus = c.attn_instances * ah.gpus_per_server +
                    c.ffn_instances * fh.gpus_per_server;
  plan.flags = vet_plan(plan, model, w, catalog);
  plan.predicted_tgs = predicted_tgs(plan, w);
  if (c.mode == PlanMode::afd) {
    plan.theoretical_usd_per_1m = attention_cost_usd(model, w, ah).usd_per_1m +
                                  ffn_cost_usd(model, w, fh);
  } else {
    plan.theoretical_usd_per_1m = attention_cost_usd(model, w, ah).usd_per_1m +
                                  ffn_cost_usd(model, w, ah);
  }
  return plan;
}

std::vector<Candidate> enumerate_candidates(std::span<const AcceleratorSpec> priced,
                                            const SearchOptions& opts) {
  std::vector<Candidate> grid;
  const int n_hw = static_cast<int>(priced.size());
  for (int mode = 0; mode < 2; ++mode)
    for (int ai = 0; ai < n_hw; ++ai)
      for (int fi = 0; fi < n_hw; ++fi) {
        if (mode == 1 && fi != ai) continue;  // colocated: one hardware
        for (int a = 1; a <= opts.max_attn_instances; ++a)
          for (int f = 1; f <= opts.max_ffn_instances; ++f)
            for (std::int64_t mb = opts.micro_batch_step; mb <= opts.max_micro_batch;
                 mb += opts.micro_batch_step)
              grid.push_back({mode == 0 ? PlanMode::afd : PlanMode::colocated,
                              ai, fi, a, f, mb});
      }
  return grid;
}

std::vector<DeploymentPlan> run_search(const ModelSpec& model, const Workload& w,
                                       const Catalog& catalog,
                                       const SearchOptions& opts, bool parallel) {
  std::vector<AcceleratorSpec> priced;
  for (const auto& a : catalog.accelerators)
    if (quotable(a)) priced.push_back(a);
  if (priced.empty()) throw Error("catalog has no priced accelerators");

  const std::vector<Candidate> grid = enumerate_candidates(priced, opts);
  std::vector<DeploymentPlan> plans(grid.size());

#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(grid.size()); ++i)
    plans[i] = evaluate(grid[i], model, w, catalog, priced);

  std::erase_if(plans, [&](const DeploymentPlan& p) {
    if (!p.flags.net_ok || !p.flags.stage_ok) return true;
    if (opts.strict_sparsity && !p.flags.sparsity_ok) return true;
    return false;
  });
  std::stable_sort(plans.begin(), plans.end(),
                   [](const DeploymentPlan& a, const DeploymentPlan& b) {
                     if (a.theoretical_usd_per_1m != b.theoretical_usd_per_1m)
                       return a.theoretical_usd_per_1m < b.theoretical_usd_per_1m;
                     if (a.predicted_tgs != b.predicted_tgs)
                       return a.predicted_tgs > b.predicted_tgs;
                     if (a.attn_hw != b.attn_hw) return a.attn_hw < b.attn_hw;
                     if (a.ffn_hw != b.ffn_hw) return a.ffn_hw < b.ffn_hw;
                     if (a.attn_instances != b.attn_instances)
                       return a.attn_instances < b.attn_instances;
                     if (a.ffn_instances != b.ffn_instances)
                       return a.ffn_instances < b.ffn_instances;
                     return a.micro_batch < b.micro_batch;
                   });
  return plans;
}

}  // namespace

std::vector<DeploymentPlan> search_plans(const ModelSpec& model, const Workload& w,
                                         const Catalog& catalog,
                                         const SearchOptions& opts) {
  return run_search(model, w, catalog, opts, opts.parallel);
}

std::vector<DeploymentPlan> search_plans_serial(const ModelSpec& model,
                                                const Workload& w,
                                                const Catalog& catalog,
                                                const SearchOptions& opts) {
  return run_search(model, w, catalog, opts, false);
}

std::vector<ParetoPoint> pareto(std::span<const ModelSpec> models, const Workload& w,
                                const Catalog& catalog, bool strict_sparsity) {
  std::vector<ParetoPoint> points;
  for (const auto& m : models) {
    ParetoPoint p;
    p.model = m.name;
    p.activated_params = m.activated_params;
    p.quote = best_afd_quote(m, w, catalog.accelerators, strict_sparsity);
    p.colocated = best_colocated_quote(m, w, catalog.accelerators);
    p.best_usd_per_1m = std::min(p.quote.total_usd_per_1m, p.colocated.total_usd_per_1m);
    points.push_back(std::move(p));
  }
  std::sort(points.begin(), points.end(),
            [](const ParetoPoint& a, const ParetoPoint& b) {
              if (a.activated_params != b.activated_params)
                return a.activated_params < b.activated_params;
              return a.model < b.model;
            });
  // A point is dominated if some other model activates no more parameters
  // and decodes no more expensively (strictly better in one of the two).
  for (auto& p : points) {
    p.on_frontier = true;
    for (const auto& q : points) {
      if (&p == &q) continue;
      const bool leq = q.activated_params <= p.activated_params &&
                       q.best_usd_per_1m <= p.best_usd_per_1m;
      const bool strict = q.activated_params < p.activated_params ||
                          q.best_usd_per_1m < p.best_usd_per_1m;
      if (leq && strict) {
        p.on_frontier = false;
        break;
      }
    }
  }
  return points;
}

}  // namespace afd
