#pragma once

// Minimal TOML reader covering the catalog schema: tables, arrays of tables,
// and scalar key/value pairs (string, integer, float, boolean). Anything
// outside that subset is rejected with a line-numbered ParseError. Values
// remember their source line so schema errors can point at the file.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "afdsim/types.hpp"

namespace afd::toml {

struct Table;

struct Value {
  std::variant<std::int64_t, double, bool, std::string> data;
  int line = 0;

  bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_float() const { return std::holds_alternative<double>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
};

struct Table {
  std::map<std::string, Value> values;
  std::map<std::string, std::unique_ptr<Table>> tables;
  std::map<std::string, std::vector<std::unique_ptr<Table>>> table_arrays;
  int line = 0;
};

// Parses a whole document. `origin` names the source in error messages.
Table parse(std::string_view text, std::string_view origin);

}  // namespace afd::toml
