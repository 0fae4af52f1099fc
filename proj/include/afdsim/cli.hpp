#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "afdsim/types.hpp"

namespace afd {

enum class Command { cost, units, intensity, sparsity, size, plan, pareto, simulate };
enum class OutputFormat { table, csv, jsonl };

OutputFormat output_format_from_string(std::string_view s);

struct ReportRequest {
  Command command = Command::cost;
  std::optional<std::filesystem::path> catalog_path;  // builtin when absent
  std::vector<std::string> models;  // empty = all
  std::vector<std::string> accels;  // empty = every priced accelerator
  Workload workload;
  OutputFormat format = OutputFormat::table;
  std::optional<std::filesystem::path> output;  // stdout when absent
  bool strict_sparsity = false;
  std::optional<double> net_efficiency;  // overrides every accelerator

  // size
  double linear_weight_bytes = 6.7e7;
  double bw_fraction = 0.5;
  // plan
  int top = 10;
  // pareto
  std::optional<std::filesystem::path> points_path;
  // simulate
  std::string plan_shape = "2A2F";
  std::int64_t micro_batch = 2048;
  std::string attn_hw = "H800";
  std::string ffn_hw = "H800";
  std::optional<std::filesystem::path> trace_path;
};

// Dispatches a request. Report data goes to `out` (or request.output);
// diagnostics go to `err` only. Returns the process exit code:
// 0 success, 1 domain error, 2 usage error.
int run(const ReportRequest& request, std::ostream& out, std::ostream& err);

}  // namespace afd
