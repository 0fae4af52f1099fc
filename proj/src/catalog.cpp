#include "afdsim/catalog.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "afdsim/toml.hpp"

namespace afd {

namespace {

// ---- schema reader ----------------------------------------------------

struct FieldReader {
  const toml::Table& table;
  std::string where;
  mutable std::set<std::string> consumed;

  [[noreturn]] void fail(const std::string& msg, int line = 0) const {
    std::ostringstream os;
    os << where;
    if (line > 0) os << " (line " << line << ")";
    os << ": " << msg;
    throw ParseError(os.str());
  }

  const toml::Value* find(const std::string& key) const {
    consumed.insert(key);
    auto it = table.values.find(key);
    return it == table.values.end() ? nullptr : &it->second;
  }

  const toml::Value& get(const std::string& key) const {
    const toml::Value* v = find(key);
    if (!v) fail("missing required key '" + key + "'", table.line);
    return *v;
  }

  std::int64_t get_int(const std::string& key) const {
    const toml::Value& v = get(key);
    if (!v.is_int()) fail("key '" + key + "' must be an integer", v.line);
    return std::get<std::int64_t>(v.data);
  }

  std::int64_t get_int_or(const std::string& key, std::int64_t def) const {
    const toml::Value* v = find(key);
    if (!v) return def;
    if (!v->is_int()) fail("key '" + key + "' must be an integer", v->line);
    return std::get<std::int64_t>(v->data);
  }

  double get_float(const std::string& key) const {
    const toml::Value& v = get(key);
    if (v.is_int()) return static_cast<double>(std::get<std::int64_t>(v.data));
    if (!v.is_float()) fail("key '" + key + "' must be a number", v.line);
    return std::get<double>(v.data);
  }

  std::optional<double> get_float_opt(const std::string& key) const {
    const toml::Value* v = find(key);
    if (!v) return std::nullopt;
    if (v->is_int()) return static_cast<double>(std::get<std::int64_t>(v->data));
    if (!v->is_float()) fail("key '" + key + "' must be a number", v->line);
    return std::get<double>(v->data);
  }

  std::string get_string(const std::string& key) const {
    const toml::Value& v = get(key);
    if (!v.is_string()) fail("key '" + key + "' must be a string", v.line);
    return std::get<std::string>(v.data);
  }

  // Fail-closed: every key present must have been consumed by the schema.
  void finish() const {
    for (const auto& [k, v] : table.values)
      if (!consumed.count(k)) fail("unknown key '" + k + "'", v.line);
  }
};

QuantScheme read_quant(const toml::Table& t, const std::string& where) {
  FieldReader r{t, where + ".quant", {}};
  QuantScheme q;
  q.kv_store_bytes = static_cast<int>(r.get_int("kv_store_bytes"));
  q.weight_bytes = static_cast<int>(r.get_int("weight_bytes"));
  q.dispatch_bytes = static_cast<int>(r.get_int("dispatch_bytes"));
  q.combine_bytes = static_cast<int>(r.get_int("combine_bytes"));
  q.compute_kind = compute_kind_from_string(r.get_string("compute_kind"));
  r.finish();
  return q;
}

AttentionLayerGroup read_group(const toml::Table& t, const std::string& where) {
  FieldReader r{t, where, {}};
  AttentionLayerGroup g;
  const std::string kind = r.get_string("kind");
  try {
    g.kind = attention_kind_from_string(kind);
  } catch (const SpecError& e) {
    r.fail(e.what(), t.line);
  }
  g.layer_count = static_cast<int>(r.get_int("layer_count"));
  switch (g.kind) {
    case AttentionKind::windowed:
      g.window_len = r.get_int("window_len");
      [[fallthrough]];
    case AttentionKind::full:
      g.n_q_heads = static_cast<int>(r.get_int("n_q_heads"));
      g.qk_dim = static_cast<int>(r.get_int("qk_dim"));
      g.v_dim = static_cast<int>(r.get_int("v_dim"));
      g.kv_token_bytes = r.get_int("kv_token_bytes");
      break;
    case AttentionKind::linear_state:
      g.const_state_bytes = r.get_int("const_state_bytes");
      g.const_flops_per_token = r.get_int("const_flops_per_token");
      break;
  }
  r.finish();
  return g;
}

ModelSpec read_model(const toml::Table& t, std::size_t index) {
  const std::string where = "models[" + std::to_string(index) + "]";
  FieldReader r{t, where, {}};
  ModelSpec m;
  m.name = r.get_string("name");
  m.total_params = r.get_int("total_params");
  m.activated_params = r.get_int("activated_params");
  m.n_layers = static_cast<int>(r.get_int("n_layers"));
  m.hidden_dim = static_cast<int>(r.get_int("hidden_dim"));
  m.attn_linear_params = r.get_int("attn_linear_params");
  m.ffn_activated_params = r.get_int("ffn_activated_params");
  m.ffn_total_weight_bytes = r.get_int("ffn_total_weight_bytes");
  m.moe_sparsity = r.get_float("moe_sparsity");
  m.effective_rank = r.get_int_or("effective_rank", 0);
  r.finish();

  auto quant_it = t.tables.find("quant");
  if (quant_it == t.tables.end())
    throw ParseError(where + ": missing [" + where + ".quant] table");
  m.quant = read_quant(*quant_it->second, where);

  auto groups_it = t.table_arrays.find("attention_groups");
  if (groups_it == t.table_arrays.end() || groups_it->second.empty())
    throw ParseError(where + ": at least one [[models.attention_groups]] required");
  for (std::size_t i = 0; i < groups_it->second.size(); ++i)
    m.attention_groups.push_back(read_group(
        *groups_it->second[i], where + ".attention_groups[" + std::to_string(i) + "]"));

  for (const auto& [k, sub] : t.tables)
    if (k != "quant")
      throw ParseError(where + ": unknown table '" + k + "' (line " +
                       std::to_string(sub->line) + ")");
  for (const auto& [k, arr] : t.table_arrays)
    if (k != "attention_groups")
      throw ParseError(where + ": unknown table array '" + k + "'");
  return m;
}

AcceleratorSpec read_accel(const toml::Table& t, std::size_t index) {
  const std::string where = "accelerators[" + std::to_string(index) + "]";
  FieldReader r{t, where, {}};
  AcceleratorSpec a;
  a.name = r.get_string("name");
  a.price_usd_per_hour = r.get_float_opt("price_usd_per_hour");
  a.flops_16bit = r.get_float("flops_16bit");
  a.flops_8bit = r.get_float_opt("flops_8bit");
  a.mem_bw = r.get_float("mem_bw");
  a.net_bw_per_server = r.get_float("net_bw_per_server");
  a.gpus_per_server = static_cast<int>(r.get_int("gpus_per_server"));
  auto eff = r.get_float_opt("net_efficiency");
  a.net_efficiency = eff.value_or(1.0);
  r.finish();
  if (!t.tables.empty() || !t.table_arrays.empty())
    throw ParseError(where + ": nested tables are not part of the schema");
  return a;
}

template <typename T>
void reject_duplicates(const std::vector<T>& items, const char* what) {
  std::set<std::string> seen;
  for (const auto& it : items)
    if (!seen.insert(it.name).second)
      throw ParseError(std::string("duplicate ") + what + " name '" + it.name + "'");
}

// ---- writer ------------------------------------------------------------

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_model(std::ostringstream& os, const ModelSpec& m) {
  os << "[[models]]\n";
  os << "name = \"" << m.name << "\"\n";
  os << "total_params = " << m.total_params << "\n";
  os << "activated_params = " << m.activated_params << "\n";
  os << "n_layers = " << m.n_layers << "\n";
  os << "hidden_dim = " << m.hidden_dim << "\n";
  os << "attn_linear_params = " << m.attn_linear_params << "\n";
  os << "ffn_activated_params = " << m.ffn_activated_params << "\n";
  os << "ffn_total_weight_bytes = " << m.ffn_total_weight_bytes << "\n";
  os << "moe_sparsity = " << num(m.moe_sparsity) << "\n";
  os << "effective_rank = " << m.effective_rank << "\n";
  os << "[models.quant]\n";
  os << "kv_store_bytes = " << m.quant.kv_store_bytes << "\n";
  os << "weight_bytes = " << m.quant.weight_bytes << "\n";
  os << "dispatch_bytes = " << m.quant.dispatch_bytes << "\n";
  os << "combine_bytes = " << m.quant.combine_bytes << "\n";
  os << "compute_kind = \"" << to_string(m.quant.compute_kind) << "\"\n";
  for (const auto& g : m.attention_groups) {
    os << "[[models.attention_groups]]\n";
    os << "kind = \"" << to_string(g.kind) << "\"\n";
    os << "layer_count = " << g.layer_count << "\n";
    switch (g.kind) {
      case AttentionKind::windowed:
        os << "window_len = " << g.window_len << "\n";
        [[fallthrough]];
      case AttentionKind::full:
        os << "n_q_heads = " << g.n_q_heads << "\n";
        os << "qk_dim = " << g.qk_dim << "\n";
        os << "v_dim = " << g.v_dim << "\n";
        os << "kv_token_bytes = " << g.kv_token_bytes << "\n";
        break;
      case AttentionKind::linear_state:
        os << "const_state_bytes = " << g.const_state_bytes << "\n";
        os << "const_flops_per_token = " << g.const_flops_per_token << "\n";
        break;
    }
  }
  os << "\n";
}

void write_accel(std::ostringstream& os, const AcceleratorSpec& a) {
  os << "[[accelerators]]\n";
  os << "name = \"" << a.name << "\"\n";
  if (a.price_usd_per_hour)
    os << "price_usd_per_hour = " << num(*a.price_usd_per_hour) << "\n";
  os << "flops_16bit = " << num(a.flops_16bit) << "\n";
  if (a.flops_8bit) os << "flops_8bit = " << num(*a.flops_8bit) << "\n";
  os << "mem_bw = " << num(a.mem_bw) << "\n";
  os << "net_bw_per_server = " << num(a.net_bw_per_server) << "\n";
  os << "gpus_per_server = " << a.gpus_per_server << "\n";
  os << "net_efficiency = " << num(a.net_efficiency) << "\n";
  os << "\n";
}

}  // namespace

Catalog parse_catalog(std::string_view text, std::string_view origin) {
  toml::Table root = toml::parse(text, origin);

  for (const auto& [k, v] : root.values)
    throw ParseError(std::string(origin) + ":" + std::to_string(v.line) +
                     ": unknown top-level key '" + k + "'");
  for (const auto& [k, t] : root.tables)
    throw ParseError(std::string(origin) + ":" + std::to_string(t->line) +
                     ": unknown top-level table '" + k + "'");
  for (const auto& [k, arr] : root.table_arrays)
    if (k != "models" && k != "accelerators")
      throw ParseError(std::string(origin) + ": unknown top-level array '" + k + "'");

  Catalog cat;
  auto models_it = root.table_arrays.find("models");
  if (models_it == root.table_arrays.end() || models_it->second.empty())
    throw ParseError(std::string(origin) + ": no models defined");
  for (std::size_t i = 0; i < models_it->second.size(); ++i)
    cat.models.push_back(read_model(*models_it->second[i], i));

  auto accels_it = root.table_arrays.find("accelerators");
  if (accels_it == root.table_arrays.end() || accels_it->second.empty())
    throw ParseError(std::string(origin) + ": no accelerators defined");
  for (std::size_t i = 0; i < accels_it->second.size(); ++i)
    cat.accelerators.push_back(read_accel(*accels_it->second[i], i));

  reject_duplicates(cat.models, "model");
  reject_duplicates(cat.accelerators, "accelerator");
  for (const auto& m : cat.models) m.validate();
  for (const auto& a : cat.accelerators) a.validate();
  return cat;
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open catalog file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_catalog(buf.str(), path.string());
}

std::string dump_catalog(const Catalog& catalog) {
  Catalog sorted = catalog;
  std::sort(sorted.models.begin(), sorted.models.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(sorted.accelerators.begin(), sorted.accelerators.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  std::ostringstream os;
  for (const auto& m : sorted.models) write_model(os, m);
  for (const auto& a : sorted.accelerators) write_accel(os, a);
  return os.str();
}

}  // namespace afd
