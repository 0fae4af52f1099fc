#include "afdsim/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "afdsim/catalog.hpp"
#include "afdsim/costmodel.hpp"
#include "afdsim/moeplan.hpp"
#include "afdsim/pipesim.hpp"
#include "afdsim/planner.hpp"
#include "afdsim/report.hpp"
#include "afdsim/sizing.hpp"

namespace afd {

namespace {

using nlohmann::json;

OutputFormat format_from(std::string_view s) {
  if (s == "table") return OutputFormat::table;
  if (s == "csv") return OutputFormat::csv;
  if (s == "jsonl" || s == "json-lines") return OutputFormat::jsonl;
  throw Error("unknown format '" + std::string(s) + "' (table, csv, jsonl)");
}

// One report cell: display text plus a typed value for json-lines.
struct Cell {
  std::string text;
  json value;
};

Cell cell(const std::string& s) { return {s, s}; }
Cell cell_usd(double v) {
  const std::string t = fmt_usd(v);
  return {t, json::parse(t)};
}
Cell cell_sig3(double v) {
  const std::string t = fmt_sig3(v);
  if (t == "inf" || t == "-inf" || t == "nan") return {t, t};
  return {t, json::parse(t)};
}
Cell cell_int(std::int64_t v) { return {std::to_string(v), v}; }
Cell cell_bool(bool v) { return {v ? "true" : "false", v}; }

struct Report {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void render(OutputFormat fmt, std::ostream& out) const {
    switch (fmt) {
      case OutputFormat::table: {
        TableWriter w(header);
        for (const auto& r : rows) {
          std::vector<std::string> cells;
          for (const auto& c : r) cells.push_back(c.text);
          w.row(cells);
        }
        out << w.str();
        break;
      }
      case OutputFormat::csv: {
        CsvWriter w(header);
        for (const auto& r : rows) {
          std::vector<std::string> cells;
          for (const auto& c : r) cells.push_back(c.text);
          w.row(cells);
        }
        out << w.str();
        break;
      }
      case OutputFormat::jsonl: {
        for (const auto& r : rows) {
          json obj = json::object();
          for (std::size_t i = 0; i < r.size(); ++i) obj[header[i]] = r[i].value;
          out << obj.dump() << '\n';
        }
        break;
      }
    }
  }
};

struct Resolved {
  Catalog catalog;
  std::vector<const ModelSpec*> models;
  std::vector<const AcceleratorSpec*> accels;
};

Resolved resolve(const ReportRequest& req) {
  Resolved r;
  r.catalog = req.catalog_path ? load_catalog(*req.catalog_path) : builtin_catalog();
  if (req.net_efficiency) {
    for (auto& a : r.catalog.accelerators) a.net_efficiency = *req.net_efficiency;
    for (const auto& a : r.catalog.accelerators) a.validate();
  }

  if (req.models.empty()) {
    for (const auto& m : r.catalog.models) r.models.push_back(&m);
  } else {
    for (const auto& name : req.models) r.models.push_back(&r.catalog.model(name));
  }
  std::sort(r.models.begin(), r.models.end(),
            [](const ModelSpec* a, const ModelSpec* b) { return a->name < b->name; });

  if (req.accels.empty()) {
    for (const auto& a : r.catalog.accelerators)
      if (a.price_usd_per_hour) r.accels.push_back(&a);
  } else {
    for (const auto& name : req.accels) r.accels.push_back(&r.catalog.accelerator(name));
  }
  std::sort(r.accels.begin(), r.accels.end(),
            [](const AcceleratorSpec* a, const AcceleratorSpec* b) {
              return a->name < b->name;
            });
  if (r.models.empty()) throw Error("model filter resolved to nothing");
  if (r.accels.empty()) throw Error("accelerator filter resolved to nothing");
  return r;
}

Report report_cost(const Resolved& r, const ReportRequest& req) {
  Report rep;
  rep.header = {"model", "context", "accelerator",
                "attn_usd_per_1m", "binding", "ffn_usd_per_1m", "error"};
  for (const ModelSpec* m : r.models)
    for (const AcceleratorSpec* a : r.accels) {
      std::vector<Cell> row{cell(m->name), cell_int(req.workload.avg_ctx),
                            cell(a->name)};
      try {
        const AttentionCost ac = attention_cost_usd(*m, req.workload, *a);
        const double fc = ffn_cost_usd(*m, req.workload, *a);
        row.push_back(cell_usd(ac.usd_per_1m));
        row.push_back(cell(std::string(to_string(ac.binding))));
        row.push_back(cell_usd(fc));
        row.push_back(cell(""));
      } catch (const Error& e) {
        row.push_back(cell(""));
        row.push_back(cell(""));
        row.push_back(cell(""));
        row.push_back(cell(e.what()));
      }
      rep.rows.push_back(std::move(row));
    }
  return rep;
}

Report report_units(const Resolved& r) {
  Report rep;
  rep.header = {"accelerator", "compute_kind", "usd_per_flop", "usd_per_byte"};
  for (const AcceleratorSpec* a : r.accels) {
    const ComputeKind kind = a->effective_kind(ComputeKind::eight_bit);
    const UnitCosts u = unit_costs(*a, kind);
    rep.rows.push_back({cell(a->name), cell(std::string(to_string(kind))),
                        cell_sig3(u.u_flop), cell_sig3(u.u_byte)});
  }
  return rep;
}

Report report_intensity(const Resolved& r, const ReportRequest& req) {
  Report rep;
  rep.header = {"model", "group", "kind", "layers", "flops_per_byte"};
  for (const ModelSpec* m : r.models) {
    const IntensityReport ir = arithmetic_intensity(*m, req.workload);
    if (ir.scalar) {
      rep.rows.push_back({cell(m->name), cell("all"), cell("full"),
                          cell_int(m->n_layers), cell_sig3(*ir.scalar)});
    } else {
      for (std::size_t g = 0; g < ir.groups.size(); ++g)
        rep.rows.push_back({cell(m->name), cell_int(static_cast<std::int64_t>(g)),
                            cell(std::string(to_string(ir.groups[g].kind))),
                            cell_int(ir.groups[g].layer_count),
                            cell_sig3(ir.groups[g].flops_per_byte)});
    }
  }
  return rep;
}

Report report_sparsity(const Resolved& r, const ReportRequest& req) {
  Report rep;
  rep.header = {"model", "accelerator", "b_dense", "b_moe",
                "net_bytes_per_layer", "s_min", "feasible"};
  for (const ModelSpec* m : r.models)
    for (const AcceleratorSpec* a : r.accels) {
      const SparsityReport s = min_sparsity(*a, *m, req.workload);
      rep.rows.push_back({cell(m->name), cell(a->name), cell_int(s.b_dense),
                          cell_int(s.b_moe), cell_sig3(s.net_bytes_per_layer),
                          cell_sig3(s.s_min), cell_bool(s.feasible)});
    }
  return rep;
}

Report report_size(const Resolved& r, const ReportRequest& req) {
  Report rep;
  rep.header = {"model", "accelerator", "stage_budget_s", "attn_bytes_budget",
                "linear_weight_bytes", "kv_budget", "max_ctx_tokens", "max_batch",
                "ffn_bytes_per_device", "ffn_servers", "ffn_cards", "feasible",
                "reason"};
  for (const ModelSpec* m : r.models)
    for (const AcceleratorSpec* a : r.accels) {
      const SizingReport attn =
          attention_capacity(*a, *m, req.workload, req.linear_weight_bytes);
      const SizingReport ffn =
          ffn_servers_needed(*a, *m, req.workload, req.bw_fraction);
      rep.rows.push_back(
          {cell(m->name), cell(a->name), cell_sig3(attn.stage_budget),
           cell_sig3(attn.attn_bytes_budget), cell_sig3(attn.linear_weight_bytes),
           cell_sig3(attn.kv_budget), cell_sig3(attn.max_ctx_tokens),
           cell_int(attn.max_batch), cell_sig3(ffn.ffn_bytes_per_device),
           cell_int(ffn.servers_needed),
           cell_int(static_cast<std::int64_t>(ffn.servers_needed) * a->gpus_per_server),
           cell_bool(attn.feasible), cell(attn.reason)});
    }
  return rep;
}

Report report_plan(const Resolved& r, const ReportRequest& req) {
  Report rep;
  rep.header = {"model", "mode", "attn_hw", "attn_instances", "ffn_hw",
                "ffn_instances", "micro_batch", "n_micro", "total_batch",
                "total_gpus", "predicted_tgs", "usd_per_1m", "sparsity_ok",
                "net_ok", "stage_ok", "relies_on_large_ep"};
  SearchOptions opts;
  opts.strict_sparsity = req.strict_sparsity;
  for (const ModelSpec* m : r.models) {
    const auto plans = search_plans(*m, req.workload, r.catalog, opts);
    const int limit = std::min<int>(req.top, static_cast<int>(plans.size()));
    for (int i = 0; i < limit; ++i) {
      const DeploymentPlan& p = plans[i];
      rep.rows.push_back(
          {cell(m->name), cell(std::string(plan_mode_name(p.mode))), cell(p.attn_hw),
           cell_int(p.attn_instances), cell(p.ffn_hw), cell_int(p.ffn_instances),
           cell_int(p.micro_batch), cell_int(p.n_micro), cell_int(p.total_batch),
           cell_int(p.total_gpus), cell_sig3(p.predicted_tgs),
           cell_usd(p.theoretical_usd_per_1m), cell_bool(p.flags.sparsity_ok),
           cell_bool(p.flags.net_ok), cell_bool(p.flags.stage_ok),
           cell_bool(p.flags.relies_on_large_ep)});
    }
  }
  return rep;
}

Report report_pareto(const Resolved& r, const ReportRequest& req) {
  Report rep;
  rep.header = {"model", "activated_params", "context", "best_usd_per_1m",
                "attn_hw", "ffn_hw", "afd_usd_per_1m", "colocated_hw",
                "colocated_usd_per_1m", "on_frontier"};
  std::vector<ModelSpec> models;
  for (const ModelSpec* m : r.models) models.push_back(*m);
  const auto points = pareto(models, req.workload, r.catalog, req.strict_sparsity);
  for (const auto& p : points)
    rep.rows.push_back({cell(p.model), cell_int(p.activated_params),
                        cell_int(req.workload.avg_ctx), cell_usd(p.best_usd_per_1m),
                        cell(p.quote.attn_hw), cell(p.quote.ffn_hw),
                        cell_usd(p.quote.total_usd_per_1m), cell(p.colocated.hw),
                        cell_usd(p.colocated.total_usd_per_1m),
                        cell_bool(p.on_frontier)});
  return rep;
}

Report report_simulate(const Resolved& r, const ReportRequest& req,
                       std::string* trace_out) {
  if (r.models.size() != 1)
    throw Error("simulate needs exactly one --model");
  const ModelSpec& m = *r.models.front();

  DeploymentPlan plan = parse_plan_shape(req.plan_shape);
  plan.attn_hw = req.attn_hw;
  plan.ffn_hw = req.ffn_hw;
  plan.micro_batch = req.micro_batch;
  plan.n_micro = req.workload.pipeline_stages;
  plan.total_batch = plan.micro_batch * plan.n_micro;
  const AcceleratorSpec& ah = r.catalog.accelerator(plan.attn_hw);
  const AcceleratorSpec& fh = r.catalog.accelerator(plan.ffn_hw);
  plan.total_gpus = plan.attn_instances * ah.gpus_per_server +
                    plan.ffn_instances * fh.gpus_per_server;

  const StageTimes st = derive_stage_times(m, plan, req.workload, r.catalog);
  const SimResult sim = simulate(st, plan);
  const double tgs_sla = predicted_tgs(plan, req.workload);
  const PlanFlags flags = vet_plan(plan, m, req.workload, r.catalog);
  if (trace_out) *trace_out = trace_csv(sim);

  Report rep;
  rep.header = {"metric", "value"};
  auto kv = [&rep](const std::string& k, Cell v) {
    rep.rows.push_back({cell(k), std::move(v)});
  };
  kv("model", cell(m.name));
  kv("plan", cell(std::to_string(plan.attn_instances) + "A" +
                  std::to_string(plan.ffn_instances) + "F"));
  kv("micro_batch", cell_int(plan.micro_batch));
  kv("total_batch", cell_int(plan.total_batch));
  kv("total_gpus", cell_int(plan.total_gpus));
  kv("tpot_s", cell_sig3(sim.tpot));
  kv("tpot_sla_s", cell_sig3(req.workload.tpot_sla));
  kv("sla_met", cell_bool(sim.tpot <= req.workload.tpot_sla));
  kv("tgs_at_sla", cell_sig3(tgs_sla));
  kv("tgs_at_sim_tpot", cell_sig3(sim.tgs));
  kv("analytic_tpot_bound_s",
     cell_sig3(analytic_tpot_bound(st, plan)));
  for (int i = 0; i < 4; ++i) {
    const auto res = static_cast<SimResource>(i);
    kv("utilization_" + std::string(sim_resource_name(res)),
       cell_sig3(sim.utilization[i]));
  }
  kv("bubble_ffn", cell_sig3(sim.bubble_fraction[static_cast<int>(SimResource::ffn)]));
  kv("sparsity_ok", cell_bool(flags.sparsity_ok));
  kv("net_ok", cell_bool(flags.net_ok));
  kv("stage_ok", cell_bool(flags.stage_ok));
  return rep;
}

}  // namespace

OutputFormat output_format_from_string(std::string_view s) { return format_from(s); }

int run(const ReportRequest& request, std::ostream& out, std::ostream& err) {
  try {
    request.workload.validate();
    const Resolved r = resolve(request);

    std::string trace;
    Report rep;
    switch (request.command) {
      case Command::cost: rep = report_cost(r, request); break;
      case Command::units: rep = report_units(r); break;
      case Command::intensity: rep = report_intensity(r, request); break;
      case Command::sparsity: rep = report_sparsity(r, request); break;
      case Command::size: rep = report_size(r, request); break;
      case Command::plan: rep = report_plan(r, request); break;
      case Command::pareto: rep = report_pareto(r, request); break;
      case Command::simulate:
        rep = report_simulate(r, request, request.trace_path ? &trace : nullptr);
        break;
    }

    std::ostringstream body;
    rep.render(request.format, body);

    if (request.output) {
      std::ofstream f(*request.output, std::ios::binary);
      if (!f) throw Error("cannot write output file '" + request.output->string() + "'");
      f << body.str();
    } else {
      out << body.str();
    }

    if (request.command == Command::pareto && request.points_path) {
      std::ofstream f(*request.points_path, std::ios::binary);
      if (!f)
        throw Error("cannot write points file '" + request.points_path->string() + "'");
      std::ostringstream points;
      rep.render(OutputFormat::csv, points);
      f << points.str();
    }
    if (request.command == Command::simulate && request.trace_path) {
      std::ofstream f(*request.trace_path, std::ios::binary);
      if (!f)
        throw Error("cannot write trace file '" + request.trace_path->string() + "'");
      f << trace;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace afd
