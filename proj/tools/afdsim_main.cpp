#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "afdsim/cli.hpp"

namespace {

struct RawArgs {
  std::string catalog;
  std::string format = "table";
  std::string output;
  std::vector<std::string> models;
  std::vector<std::string> accels;
  std::int64_t ctx = 8192;
  double tpot = 0.05;
  int stages = 3;
  double kv_quant_factor = 1.0;
  double mtp_factor = 1.0;
  double net_efficiency = -1.0;
  bool strict_sparsity = false;
  double linear_bytes = 6.7e7;
  double bw_fraction = 0.5;
  int top = 10;
  std::string points;
  std::string plan_shape = "2A2F";
  std::int64_t micro_batch = 2048;
  std::string attn_hw = "H800";
  std::string ffn_hw = "H800";
  std::string trace;
};

afd::ReportRequest to_request(const RawArgs& raw, afd::Command cmd) {
  afd::ReportRequest req;
  req.command = cmd;
  if (!raw.catalog.empty()) req.catalog_path = raw.catalog;
  req.format = afd::output_format_from_string(raw.format);
  if (!raw.output.empty()) req.output = raw.output;
  req.models = raw.models;
  req.accels = raw.accels;
  req.workload.avg_ctx = raw.ctx;
  req.workload.tpot_sla = raw.tpot;
  req.workload.pipeline_stages = raw.stages;
  req.workload.kv_quant_factor = raw.kv_quant_factor;
  req.workload.mtp_factor = raw.mtp_factor;
  if (raw.net_efficiency > 0.0) req.net_efficiency = raw.net_efficiency;
  req.strict_sparsity = raw.strict_sparsity;
  req.linear_weight_bytes = raw.linear_bytes;
  req.bw_fraction = raw.bw_fraction;
  req.top = raw.top;
  if (!raw.points.empty()) req.points_path = raw.points;
  req.plan_shape = raw.plan_shape;
  req.micro_batch = raw.micro_batch;
  req.attn_hw = raw.attn_hw;
  req.ffn_hw = raw.ffn_hw;
  if (!raw.trace.empty()) req.trace_path = raw.trace;
  return req;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoding cost model, capacity planner and pipeline simulator "
               "for attention/FFN-disaggregated LLM serving"};
  app.require_subcommand(1);

  RawArgs raw;
  app.add_option("--catalog", raw.catalog, "Catalog file (TOML); builtin if omitted");
  app.add_option("--format", raw.format, "Output format: table, csv, jsonl")
      ->check(CLI::IsMember({"table", "csv", "jsonl"}));
  app.add_option("--output", raw.output, "Write the report to a file");
  app.add_option("--model", raw.models, "Model filter (repeatable)");
  app.add_option("--accel", raw.accels, "Accelerator filter (repeatable)");
  app.add_option("--ctx", raw.ctx, "Average context length in tokens");
  app.add_option("--tpot", raw.tpot, "Time-per-output-token SLA in seconds");
  app.add_option("--stages", raw.stages, "Pipeline stage count (3 or 4)");
  app.add_option("--kv-quant-factor", raw.kv_quant_factor,
                 "What-if divisor on KV bytes read (2 = 4-bit storage)");
  app.add_option("--mtp-factor", raw.mtp_factor,
                 "What-if multiplier on tokens scored per decode step");
  app.add_option("--net-efficiency", raw.net_efficiency,
                 "Override network efficiency on every accelerator");
  app.add_flag("--strict-sparsity", raw.strict_sparsity,
               "Reject plans whose FFN hardware cannot batch the MoE");

  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("cost", "Per-token decoding cost in USD per 1M tokens"));
  subs.push_back(app.add_subcommand("units", "Unit cost of a FLOP and a byte per accelerator"));
  subs.push_back(app.add_subcommand("intensity", "Arithmetic intensity of each attention design"));
  subs.push_back(app.add_subcommand("sparsity", "Batching and minimum MoE sparsity per accelerator"));
  auto* size = app.add_subcommand("size", "Capacity sizing for attention and FFN tiers");
  subs.push_back(size);
  size->add_option("--linear-bytes", raw.linear_bytes,
                   "Attention linear weight bytes per device");
  size->add_option("--bw-fraction", raw.bw_fraction,
                   "Memory bandwidth fraction reserved for FFN weights");
  auto* plan = app.add_subcommand("plan", "Search deployment plans");
  plan->add_option("--top", raw.top, "Plans to show per model");
  subs.push_back(plan);
  auto* pareto = app.add_subcommand("pareto", "Best cost vs activated parameters");
  pareto->add_option("--points", raw.points, "Also write a plot-data CSV here");
  subs.push_back(pareto);
  auto* sim = app.add_subcommand("simulate", "Simulate the layer-wise pipeline");
  sim->add_option("--plan", raw.plan_shape, "Plan shape, e.g. 2A2F");
  sim->add_option("--micro-batch", raw.micro_batch, "Tokens per pipeline slot");
  sim->add_option("--attn-hw", raw.attn_hw, "Attention tier hardware");
  sim->add_option("--ffn-hw", raw.ffn_hw, "FFN tier hardware");
  sim->add_option("--trace", raw.trace, "Write the event trace CSV here");
  subs.push_back(sim);
  for (CLI::App* sc : subs) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  afd::Command cmd = afd::Command::cost;
  if (app.got_subcommand("cost")) cmd = afd::Command::cost;
  else if (app.got_subcommand("units")) cmd = afd::Command::units;
  else if (app.got_subcommand("intensity")) cmd = afd::Command::intensity;
  else if (app.got_subcommand("sparsity")) cmd = afd::Command::sparsity;
  else if (app.got_subcommand("size")) cmd = afd::Command::size;
  else if (app.got_subcommand("plan")) cmd = afd::Command::plan;
  else if (app.got_subcommand("pareto")) cmd = afd::Command::pareto;
  else if (app.got_subcommand("simulate")) cmd = afd::Command::simulate;

  afd::ReportRequest req;
  try {
    req = to_request(raw, cmd);
    if (cmd == afd::Command::simulate && raw.models.empty())
      req.models = {"step3"};
  } catch (const afd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return afd::run(req, std::cout, std::cerr);
}
