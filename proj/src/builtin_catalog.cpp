#include "afdsim/catalog.hpp"

namespace afd {

namespace {

constexpr std::int64_t operator""_i(unsigned long long v) {
  return static_cast<std::int64_t>(v);
}

QuantScheme fp8_all() { return {1, 1, 1, 2, ComputeKind::eight_bit}; }

AttentionLayerGroup full_group(int layers, int n_q, int qk, int v,
                               std::int64_t kv_bytes) {
  AttentionLayerGroup g;
  g.kind = AttentionKind::full;
  g.layer_count = layers;
  g.n_q_heads = n_q;
  g.qk_dim = qk;
  g.v_dim = v;
  g.kv_token_bytes = kv_bytes;
  return g;
}

AttentionLayerGroup windowed_group(int layers, std::int64_t window, int n_q,
                                   int qk, int v, std::int64_t kv_bytes) {
  AttentionLayerGroup g = full_group(layers, n_q, qk, v, kv_bytes);
  g.kind = AttentionKind::windowed;
  g.window_len = window;
  return g;
}

AttentionLayerGroup state_group(int layers, std::int64_t state_bytes,
                                std::int64_t flops_per_token) {
  AttentionLayerGroup g;
  g.kind = AttentionKind::linear_state;
  g.layer_count = layers;
  g.const_state_bytes = state_bytes;
  g.const_flops_per_token = flops_per_token;
  return g;
}

// MLA decode in the absorbed form: queries and the attention output live in
// the compressed space, so both the QK and PV products run at
// kv_rank + rope_dim per head and the cache stores one such vector per token.
ModelSpec deepseek_v3() {
  ModelSpec m;
  m.name = "dsv3";
  m.total_params = 671'000'000'000_i;
  m.activated_params = 37'000'000'000_i;
  m.n_layers = 61;
  m.hidden_dim = 7168;
  const std::int64_t h = 7168, heads = 128, q_rank = 1536, kv_rank = 512,
                     rope = 64, head_dim = 128;
  m.attention_groups = {full_group(61, static_cast<int>(heads),
                                   static_cast<int>(kv_rank + rope),
                                   static_cast<int>(kv_rank + rope),
                                   kv_rank + rope)};  // 576 B at 8-bit KV
  m.attn_linear_params =
      61 * (h * q_rank                              // q down
            + q_rank * heads * (head_dim + rope)    // q up
            + h * (kv_rank + rope)                  // kv down
            + kv_rank * heads * (head_dim * 2)      // kv up
            + heads * head_dim * h);                // output
  const std::int64_t dense_ffn = 3 * h * 18432, expert = 3 * h * 2048;
  m.ffn_activated_params = 3 * dense_ffn + 58 * (9 * expert);  // 8 routed + 1 shared
  m.ffn_total_weight_bytes = 3 * dense_ffn + 58 * (257 * expert);
  m.moe_sparsity = 9.0 / 257.0;
  m.quant = fp8_all();
  m.effective_rank = 16384;
  return m;
}

// Same MLA geometry as dsv3 with half the query heads and a near-identical
// MoE block over 384 routed experts.
ModelSpec kimi_k2() {
  ModelSpec m;
  m.name = "kimi-k2";
  m.total_params = 1'026'000'000'000_i;
  m.activated_params = 32'000'000'000_i;
  m.n_layers = 61;
  m.hidden_dim = 7168;
  const std::int64_t h = 7168, heads = 64, q_rank = 1536, kv_rank = 512,
                     rope = 64, head_dim = 128;
  m.attention_groups = {full_group(61, static_cast<int>(heads),
                                   static_cast<int>(kv_rank + rope),
                                   static_cast<int>(kv_rank + rope),
                                   kv_rank + rope)};
  m.attn_linear_params =
      61 * (h * q_rank + q_rank * heads * (head_dim + rope) +
            h * (kv_rank + rope) + kv_rank * heads * (head_dim * 2) +
            heads * head_dim * h);
  const std::int64_t dense_ffn = 3 * h * 18432, expert = 3 * h * 2048;
  m.ffn_activated_params = 1 * dense_ffn + 60 * (9 * expert);
  m.ffn_total_weight_bytes = 1 * dense_ffn + 60 * (385 * expert);
  m.moe_sparsity = 9.0 / 385.0;
  m.quant = fp8_all();
  m.effective_rank = 8192;
  return m;
}

ModelSpec qwen3_moe() {
  ModelSpec m;
  m.name = "qwen3-moe";  // Qwen3-235B-A22B
  m.total_params = 235'000'000'000_i;
  m.activated_params = 22'000'000'000_i;
  m.n_layers = 94;
  m.hidden_dim = 4096;
  const std::int64_t h = 4096, n_q = 64, n_kv = 4, d = 128;
  m.attention_groups = {full_group(94, 64, 128, 128, 2 * n_kv * d * 1)};
  m.attn_linear_params = 94 * (h * n_q * d + 2 * h * n_kv * d + n_q * d * h);
  const std::int64_t expert = 3 * h * 1536;
  m.ffn_activated_params = 94 * (8 * expert);
  m.ffn_total_weight_bytes = 94 * (128 * expert);
  m.moe_sparsity = 8.0 / 128.0;
  m.quant = fp8_all();
  m.effective_rank = 8192;
  return m;
}

ModelSpec qwen3_32b() {
  ModelSpec m;
  m.name = "qwen3-32b";
  m.total_params = 32'800'000'000_i;
  m.activated_params = 32'800'000'000_i;
  m.n_layers = 64;
  m.hidden_dim = 5120;
  const std::int64_t h = 5120, n_q = 64, n_kv = 8, d = 128;
  m.attention_groups = {full_group(64, 64, 128, 128, 2 * n_kv * d * 1)};
  m.attn_linear_params = 64 * (h * n_q * d + 2 * h * n_kv * d + n_q * d * h);
  m.ffn_activated_params = 64 * (3 * h * 25600);
  m.ffn_total_weight_bytes = m.ffn_activated_params;  // dense
  m.moe_sparsity = 1.0;
  m.quant = fp8_all();
  m.effective_rank = 8192;
  return m;
}

// Every fourth layer attends over the whole context and keeps 16-bit KV;
// the rest use 8K chunked attention with 8-bit KV. MoE alternates with a
// dense FFN of twice the expert width, so activation is uniform per layer.
ModelSpec llama4_maverick() {
  ModelSpec m;
  m.name = "llama4-maverick";
  m.total_params = 400'000'000'000_i;
  m.activated_params = 17'000'000'000_i;
  m.n_layers = 48;
  m.hidden_dim = 5120;
  const std::int64_t h = 5120, n_q = 40, n_kv = 8, d = 128;
  m.attention_groups = {
      full_group(12, 40, 128, 128, 2 * n_kv * d * 2),
      windowed_group(36, 8192, 40, 128, 128, 2 * n_kv * d * 1)};
  m.attn_linear_params = 48 * (h * n_q * d + 2 * h * n_kv * d + n_q * d * h);
  const std::int64_t expert = 3 * h * 8192;
  m.ffn_activated_params = 48 * (2 * expert);  // 1 routed + 1 shared (dense = 2x wide)
  m.ffn_total_weight_bytes = 24 * (3 * h * 16384) + 24 * (129 * expert);
  m.moe_sparsity = 2.0 / 129.0;
  QuantScheme q = fp8_all();
  m.quant = q;
  m.effective_rank = 5120;
  return m;
}

// Hybrid: 10 softmax GQA layers with 16-bit KV, 70 linear-attention layers
// whose per-token cost is a fixed 32-bit state read+write plus a constant
// FLOP count. The per-layer constants are calibrated so that totals at 8K
// and 32K context match the model's published accounting.
ModelSpec minimax_m1() {
  ModelSpec m;
  m.name = "minimax-m1";
  m.total_params = 456'000'000'000_i;
  m.activated_params = 45'900'000'000_i;
  m.n_layers = 80;
  m.hidden_dim = 6144;
  const std::int64_t h = 6144, n_q = 64, n_kv = 8, d = 128;
  const std::int64_t state_bytes = 2 * n_q * d * d * 4;  // read + write, fp32
  m.attention_groups = {
      full_group(10, 64, 128, 128, 2 * n_kv * d * 2),
      state_group(70, state_bytes, 10'509'221_i)};
  m.attn_linear_params =
      70 * (3 * h * n_q * d + n_q * d * h + h * n_q * d)   // qkv, out, gate
      + 10 * (h * n_q * d + 2 * h * n_kv * d + n_q * d * h);
  const std::int64_t expert = 3 * h * 9216;
  m.ffn_activated_params = 80 * (2 * expert);
  m.ffn_total_weight_bytes = 80 * (32 * expert);
  m.moe_sparsity = 2.0 / 32.0;
  m.quant = fp8_all();
  m.effective_rank = 8192;
  return m;
}

ModelSpec ernie45() {
  ModelSpec m;
  m.name = "ernie45";  // ERNIE-4.5-300B-A47B
  m.total_params = 300'000'000'000_i;
  m.activated_params = 47'000'000'000_i;
  m.n_layers = 54;
  m.hidden_dim = 8192;
  const std::int64_t h = 8192, n_q = 64, n_kv = 8, d = 128;
  m.attention_groups = {full_group(54, 64, 128, 128, 2 * n_kv * d * 1)};
  m.attn_linear_params = 54 * (h * n_q * d + 2 * h * n_kv * d + n_q * d * h);
  const std::int64_t expert = 3 * h * 3584;
  m.ffn_activated_params = 54 * (8 * expert);
  m.ffn_total_weight_bytes = 3 * (3 * h * 28672) + 51 * (66 * expert);
  m.moe_sparsity = 8.0 / 66.0;
  m.quant = fp8_all();
  m.effective_rank = 8192;
  return m;
}

// MoGE routing picks one expert from each of 8 groups; with 4 shared experts
// that makes 12 active expert slots per token.
ModelSpec pangu_pro_moe() {
  ModelSpec m;
  m.name = "pangu-pro";
  m.total_params = 72'000'000'000_i;
  m.activated_params = 16'500'000'000_i;
  m.n_layers = 48;
  m.hidden_dim = 5120;
  const std::int64_t h = 5120, n_q = 40, n_kv = 8, d = 128;
  m.attention_groups = {full_group(48, 40, 128, 128, 2 * n_kv * d * 1)};
  m.attn_linear_params = 48 * (h * n_q * d + 2 * h * n_kv * d + n_q * d * h);
  const std::int64_t expert = 3 * h * 1344;
  m.ffn_activated_params = 48 * (12 * expert);
  m.ffn_total_weight_bytes = 48 * (68 * expert);
  m.moe_sparsity = 12.0 / 68.0;
  m.quant = fp8_all();
  m.effective_rank = 5120;
  return m;
}

// MFA: 64 query heads sharing a single 256-dim K and V head; queries are
// factorized through a 2048 low-rank projection. KV is 512 B/token at 8-bit.
ModelSpec step3() {
  ModelSpec m;
  m.name = "step3";
  m.total_params = 316'000'000'000_i;
  m.activated_params = 38'000'000'000_i;
  m.n_layers = 61;
  m.hidden_dim = 7168;
  const std::int64_t h = 7168, n_q = 64, d = 256, q_rank = 2048;
  m.attention_groups = {full_group(61, 64, 256, 256, 2 * d * 1)};
  m.attn_linear_params = 61 * (h * q_rank       // q down
                               + q_rank * n_q * d  // q up
                               + h * d             // k
                               + h * d             // v
                               + n_q * d * h);     // output
  const std::int64_t dense_ffn = 3 * h * 18432, expert = 3 * h * 5120;
  m.ffn_activated_params = 5 * dense_ffn + 56 * (4 * expert);  // 3 routed + 1 shared
  m.ffn_total_weight_bytes = 5 * dense_ffn + 56 * (49 * expert);
  m.moe_sparsity = 4.0 / 49.0;
  m.quant = fp8_all();
  m.effective_rank = 16384;
  return m;
}

AcceleratorSpec accel(std::string name, std::optional<double> price,
                      double f16, std::optional<double> f8, double bw,
                      double net, int gps) {
  AcceleratorSpec a;
  a.name = std::move(name);
  a.price_usd_per_hour = price;
  a.flops_16bit = f16;
  a.flops_8bit = f8;
  a.mem_bw = bw;
  a.net_bw_per_server = net;
  a.gpus_per_server = gps;
  return a;
}

}  // namespace

Catalog builtin_catalog() {
  Catalog cat;
  cat.models = {deepseek_v3(), kimi_k2(),        qwen3_moe(),
                qwen3_32b(),   llama4_maverick(), minimax_m1(),
                ernie45(),     pangu_pro_moe(),   step3()};
  // H800/H20 servers carry 8x400Gb/s NICs, A800/910B 8x200Gb/s (PCIe bound).
  cat.accelerators = {
      accel("H800", 2.0, 9.89e14, 1.98e15, 3.35e12, 4.0e11, 8),
      accel("H20", 0.8, 1.48e14, 2.96e14, 4.00e12, 4.0e11, 8),
      accel("A800", 0.75, 3.12e14, std::nullopt, 2.00e12, 2.0e11, 8),
      accel("910B", 0.67, 2.80e14, std::nullopt, 1.60e12, 2.0e11, 8),
      // sizing-only entries, no public cloud price
      accel("L20", std::nullopt, 1.195e14, 2.39e14, 8.64e11, 1.0e11, 8),
      accel("L4", std::nullopt, 1.21e14, 2.42e14, 3.00e11, 1.0e11, 8),
  };
  return cat;
}

}  // namespace afd
