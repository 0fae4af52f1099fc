#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace afd {

// Base error for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Catalog file could not be parsed (carries line/field context in the message).
struct ParseError : Error {
  using Error::Error;
};

// A spec violated one of its invariants (message names the field).
struct SpecError : Error {
  using Error::Error;
};

enum class ComputeKind { eight_bit, sixteen_bit };

std::string_view to_string(ComputeKind k);
ComputeKind compute_kind_from_string(std::string_view s);

// Element sizes for the quantization scheme a model ships with.
// dispatch = attention->FFN activations, combine = FFN->attention.
struct QuantScheme {
  int kv_store_bytes = 1;
  int weight_bytes = 1;
  int dispatch_bytes = 1;
  int combine_bytes = 2;
  ComputeKind compute_kind = ComputeKind::eight_bit;
};

enum class AttentionKind { full, windowed, linear_state };

std::string_view to_string(AttentionKind k);
AttentionKind attention_kind_from_string(std::string_view s);

// A run of layers sharing one attention design. full/windowed groups append
// kv_token_bytes per token per layer; linear_state groups touch a fixed
// recurrent state per decoded token instead.
struct AttentionLayerGroup {
  AttentionKind kind = AttentionKind::full;
  int layer_count = 0;
  int n_q_heads = 0;
  int qk_dim = 0;  // effective per-head dim in the QK product (absorbed dim for MLA)
  int v_dim = 0;   // effective per-head dim in the PV product
  std::int64_t window_len = 0;             // windowed only
  std::int64_t kv_token_bytes = 0;         // full/windowed only
  std::int64_t const_state_bytes = 0;      // linear_state only, per layer
  std::int64_t const_flops_per_token = 0;  // linear_state only, per layer
};

struct ModelSpec {
  std::string name;
  std::int64_t total_params = 0;
  std::int64_t activated_params = 0;
  int n_layers = 0;
  int hidden_dim = 0;
  std::vector<AttentionLayerGroup> attention_groups;
  std::int64_t attn_linear_params = 0;      // all projections around attention, summed over layers
  std::int64_t ffn_activated_params = 0;    // activated FFN params per token
  std::int64_t ffn_total_weight_bytes = 0;  // all FFN weights at storage precision
  double moe_sparsity = 1.0;                // activated expert fraction, shared experts included
  QuantScheme quant;
  std::int64_t effective_rank = 0;  // informational

  void validate() const;  // throws SpecError naming the offending field
};

struct AcceleratorSpec {
  std::string name;
  std::optional<double> price_usd_per_hour;  // absent: sizing-only entry
  double flops_16bit = 0.0;                  // FLOP/s
  std::optional<double> flops_8bit;          // FLOP/s, absent if no native 8-bit rate
  double mem_bw = 0.0;                       // bytes/s
  double net_bw_per_server = 0.0;            // aggregate NIC bytes/s of one server
  int gpus_per_server = 8;
  double net_efficiency = 1.0;  // measured/peak network throughput ratio

  void validate() const;

  // Peak rate for a compute kind; throws SpecError for eight_bit when absent.
  double flops(ComputeKind k) const;
  // Kind actually used when a model asks for `requested`: hardware without a
  // native 8-bit rate computes in 16-bit while storage stays 8-bit.
  ComputeKind effective_kind(ComputeKind requested) const;
  double roofline(ComputeKind k) const { return flops(k) / mem_bw; }
};

struct Workload {
  std::int64_t avg_ctx = 8192;  // tokens
  double tpot_sla = 0.05;       // seconds
  int pipeline_stages = 3;      // 3 or 4
  double kv_quant_factor = 1.0; // >= 1, divides KV bytes read
  double mtp_factor = 1.0;      // >= 1, multiplies tokens scored per decode step

  void validate() const;
};

struct Catalog {
  std::vector<ModelSpec> models;
  std::vector<AcceleratorSpec> accelerators;

  const ModelSpec& model(std::string_view name) const;             // throws Error listing names
  const AcceleratorSpec& accelerator(std::string_view name) const; // throws Error listing names
};

}  // namespace afd
