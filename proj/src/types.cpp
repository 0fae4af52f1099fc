#include "afdsim/types.hpp"

#include <sstream>

namespace afd {

std::string_view to_string(ComputeKind k) {
  return k == ComputeKind::eight_bit ? "eight_bit" : "sixteen_bit";
}

ComputeKind compute_kind_from_string(std::string_view s) {
  if (s == "eight_bit") return ComputeKind::eight_bit;
  if (s == "sixteen_bit") return ComputeKind::sixteen_bit;
  throw SpecError("unknown compute_kind '" + std::string(s) +
                  "' (expected eight_bit or sixteen_bit)");
}

std::string_view to_string(AttentionKind k) {
  switch (k) {
    case AttentionKind::full: return "full";
    case AttentionKind::windowed: return "windowed";
    case AttentionKind::linear_state: return "linear_state";
  }
  return "?";
}

AttentionKind attention_kind_from_string(std::string_view s) {
  if (s == "full") return AttentionKind::full;
  if (s == "windowed") return AttentionKind::windowed;
  if (s == "linear_state") return AttentionKind::linear_state;
  throw SpecError("unknown attention kind '" + std::string(s) + "'");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw SpecError(what);
}

bool valid_elem_bytes(int b) { return b == 1 || b == 2 || b == 4; }

}  // namespace

void ModelSpec::validate() const {
  const std::string at = "model '" + name + "': ";
  require(!name.empty(), "model with empty name");
  require(n_layers >= 1, at + "n_layers must be >= 1");
  require(hidden_dim >= 1, at + "hidden_dim must be >= 1");
  require(total_params > 0, at + "total_params must be > 0");
  require(activated_params > 0 && activated_params <= total_params,
          at + "activated_params must be in (0, total_params]");
  require(moe_sparsity > 0.0 && moe_sparsity <= 1.0,
          at + "moe_sparsity must be in (0, 1]");
  require(attn_linear_params >= 0, at + "attn_linear_params must be >= 0");
  require(ffn_activated_params >= 0, at + "ffn_activated_params must be >= 0");
  require(ffn_total_weight_bytes >=
              ffn_activated_params * static_cast<std::int64_t>(quant.weight_bytes),
          at + "ffn_total_weight_bytes must cover activated weights at weight_bytes");

  require(valid_elem_bytes(quant.kv_store_bytes), at + "quant.kv_store_bytes must be 1, 2 or 4");
  require(valid_elem_bytes(quant.weight_bytes), at + "quant.weight_bytes must be 1, 2 or 4");
  require(valid_elem_bytes(quant.dispatch_bytes), at + "quant.dispatch_bytes must be 1, 2 or 4");
  require(valid_elem_bytes(quant.combine_bytes), at + "quant.combine_bytes must be 1, 2 or 4");

  require(!attention_groups.empty(), at + "attention_groups must not be empty");
  std::int64_t layer_sum = 0;
  for (std::size_t i = 0; i < attention_groups.size(); ++i) {
    const auto& g = attention_groups[i];
    const std::string gat = at + "attention_groups[" + std::to_string(i) + "]: ";
    require(g.layer_count >= 1, gat + "layer_count must be >= 1");
    layer_sum += g.layer_count;
    switch (g.kind) {
      case AttentionKind::full:
      case AttentionKind::windowed:
        require(g.kv_token_bytes > 0, gat + "kv_token_bytes must be > 0");
        require(g.const_state_bytes == 0, gat + "const_state_bytes must be 0 for " +
                                              std::string(to_string(g.kind)));
        require(g.n_q_heads >= 1, gat + "n_q_heads must be >= 1");
        require(g.qk_dim >= 1 && g.v_dim >= 1, gat + "qk_dim/v_dim must be >= 1");
        if (g.kind == AttentionKind::windowed)
          require(g.window_len > 0, gat + "window_len must be > 0");
        else
          require(g.window_len == 0, gat + "window_len only applies to windowed groups");
        break;
      case AttentionKind::linear_state:
        require(g.kv_token_bytes == 0, gat + "kv_token_bytes must be 0 for linear_state");
        require(g.const_state_bytes > 0, gat + "const_state_bytes must be > 0");
        require(g.const_flops_per_token >= 0, gat + "const_flops_per_token must be >= 0");
        require(g.window_len == 0, gat + "window_len only applies to windowed groups");
        break;
    }
  }
  require(layer_sum <= n_layers, at + "sum of group layer_count exceeds n_layers");
}

double AcceleratorSpec::flops(ComputeKind k) const {
  if (k == ComputeKind::sixteen_bit) return flops_16bit;
  if (!flops_8bit)
    throw SpecError("accelerator '" + name + "': no native 8-bit rate");
  return *flops_8bit;
}

ComputeKind AcceleratorSpec::effective_kind(ComputeKind requested) const {
  if (requested == ComputeKind::eight_bit && !flops_8bit)
    return ComputeKind::sixteen_bit;
  return requested;
}

void AcceleratorSpec::validate() const {
  const std::string at = "accelerator '" + name + "': ";
  require(!name.empty(), "accelerator with empty name");
  if (price_usd_per_hour)
    require(*price_usd_per_hour > 0.0, at + "price_usd_per_hour must be > 0");
  require(flops_16bit > 0.0, at + "flops_16bit must be > 0");
  if (flops_8bit) require(*flops_8bit > 0.0, at + "flops_8bit must be > 0");
  require(mem_bw > 0.0, at + "mem_bw must be > 0");
  require(net_bw_per_server > 0.0, at + "net_bw_per_server must be > 0");
  require(gpus_per_server >= 1, at + "gpus_per_server must be >= 1");
  require(net_efficiency > 0.0 && net_efficiency <= 1.0,
          at + "net_efficiency must be in (0, 1]");
}

void Workload::validate() const {
  require(avg_ctx >= 1, "workload: avg_ctx must be >= 1");
  require(tpot_sla > 0.0, "workload: tpot_sla must be > 0");
  require(pipeline_stages == 3 || pipeline_stages == 4,
          "workload: pipeline_stages must be 3 or 4");
  require(kv_quant_factor >= 1.0, "workload: kv_quant_factor must be >= 1");
  require(mtp_factor >= 1.0, "workload: mtp_factor must be >= 1");
}

namespace {

template <typename T>
const T& find_by_name(const std::vector<T>& items, std::string_view name,
                      const char* what) {
  for (const auto& it : items)
    if (it.name == name) return it;
  std::ostringstream os;
  os << "unknown " << what << " '" << name << "'; available:";
  for (const auto& it : items) os << ' ' << it.name;
  throw Error(os.str());
}

}  // namespace

const ModelSpec& Catalog::model(std::string_view name) const {
  return find_by_name(models, name, "model");
}

const AcceleratorSpec& Catalog::accelerator(std::string_view name) const {
  return find_by_name(accelerators, name, "accelerator");
}

}  // namespace afd
