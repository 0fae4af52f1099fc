#include "afdsim/toml.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace afd::toml {

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  std::string origin;

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw ParseError(os.str());
  }
};

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

void skip_blanks(Cursor& c, std::string_view& rest) {
  while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t'))
    rest.remove_prefix(1);
  (void)c;
}

std::vector<std::string> parse_dotted_key(Cursor& c, std::string_view raw) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : raw) {
    if (ch == '.') {
      if (cur.empty()) c.fail("empty key segment");
      parts.push_back(cur);
      cur.clear();
    } else if (is_key_char(ch)) {
      cur.push_back(ch);
    } else if (ch == ' ' || ch == '\t') {
      continue;
    } else {
      c.fail(std::string("unsupported character '") + ch + "' in key");
    }
  }
  if (cur.empty()) c.fail("empty key segment");
  parts.push_back(cur);
  return parts;
}

std::string parse_basic_string(Cursor& c, std::string_view& rest) {
  rest.remove_prefix(1);  // opening quote
  std::string out;
  while (true) {
    if (rest.empty()) c.fail("unterminated string");
    char ch = rest.front();
    rest.remove_prefix(1);
    if (ch == '"') return out;
    if (ch == '\\') {
      if (rest.empty()) c.fail("dangling escape in string");
      char esc = rest.front();
      rest.remove_prefix(1);
      switch (esc) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        default: c.fail(std::string("unsupported escape '\\") + esc + "'");
      }
    } else {
      out.push_back(ch);
    }
  }
}

Value parse_scalar(Cursor& c, std::string_view& rest) {
  Value v;
  v.line = c.line;
  if (rest.empty()) c.fail("missing value after '='");
  if (rest.front() == '"') {
    v.data = parse_basic_string(c, rest);
    return v;
  }
  if (rest.front() == '[' || rest.front() == '{')
    c.fail("inline arrays/tables are not supported by the catalog schema");

  std::size_t end = 0;
  while (end < rest.size() && rest[end] != ' ' && rest[end] != '\t' &&
         rest[end] != '#')
    ++end;
  std::string token(rest.substr(0, end));
  rest.remove_prefix(end);

  if (token == "true") { v.data = true; return v; }
  if (token == "false") { v.data = false; return v; }

  std::string digits;
  digits.reserve(token.size());
  bool prev_digit = false;
  for (char ch : token) {
    if (ch == '_') {
      if (!prev_digit) c.fail("misplaced '_' in number '" + token + "'");
      prev_digit = false;
      continue;
    }
    prev_digit = std::isdigit(static_cast<unsigned char>(ch)) != 0;
    digits.push_back(ch);
  }

  const bool floaty = digits.find_first_of(".eE") != std::string::npos &&
                      digits.find_first_of("0123456789") != std::string::npos;
  if (!floaty) {
    std::int64_t iv = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), iv);
    if (ec == std::errc() && p == digits.data() + digits.size()) {
      v.data = iv;
      return v;
    }
  }
  char* endp = nullptr;
  double dv = std::strtod(digits.c_str(), &endp);
  if (endp != digits.c_str() + digits.size() || digits.empty())
    c.fail("cannot parse value '" + token + "'");
  v.data = dv;
  return v;
}

// Walks `path` from the root, descending through the newest element of any
// array of tables, creating intermediate tables as needed.
Table* navigate(Cursor& c, Table* root, const std::vector<std::string>& path,
                std::size_t count) {
  Table* t = root;
  for (std::size_t i = 0; i < count; ++i) {
    const std::string& k = path[i];
    if (auto it = t->table_arrays.find(k); it != t->table_arrays.end()) {
      if (it->second.empty()) c.fail("internal: empty table array");
      t = it->second.back().get();
      continue;
    }
    auto [it, inserted] = t->tables.try_emplace(k, nullptr);
    if (inserted) {
      it->second = std::make_unique<Table>();
      it->second->line = c.line;
    }
    t = it->second.get();
  }
  return t;
}

}  // namespace

Table parse(std::string_view text, std::string_view origin) {
  Table root;
  Cursor c{text, 0, 1, std::string(origin)};
  Table* current = &root;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? text.size() - pos
                                                 : eol - pos);
    std::string_view rest = line;
    skip_blanks(c, rest);

    if (!rest.empty() && rest.front() != '#') {
      if (rest.front() == '[') {
        const bool is_array = rest.size() > 1 && rest[1] == '[';
        const std::string_view close = is_array ? "]]" : "]";
        rest.remove_prefix(is_array ? 2 : 1);
        std::size_t endb = rest.find(close);
        if (endb == std::string_view::npos) c.fail("unterminated table header");
        auto path = parse_dotted_key(c, rest.substr(0, endb));
        rest.remove_prefix(endb + close.size());
        skip_blanks(c, rest);
        if (!rest.empty() && rest.front() != '#')
          c.fail("trailing characters after table header");

        Table* parent = navigate(c, &root, path, path.size() - 1);
        const std::string& leaf = path.back();
        if (is_array) {
          if (parent->tables.count(leaf))
            c.fail("'" + leaf + "' is already a plain table");
          auto& arr = parent->table_arrays[leaf];
          arr.push_back(std::make_unique<Table>());
          arr.back()->line = c.line;
          current = arr.back().get();
        } else {
          if (parent->table_arrays.count(leaf))
            c.fail("'" + leaf + "' is already an array of tables");
          if (parent->tables.count(leaf))
            c.fail("duplicate table [" + leaf + "]");
          auto t = std::make_unique<Table>();
          t->line = c.line;
          current = t.get();
          parent->tables.emplace(leaf, std::move(t));
        }
      } else {
        std::size_t eq = rest.find('=');
        if (eq == std::string_view::npos) c.fail("expected 'key = value'");
        auto keys = parse_dotted_key(c, rest.substr(0, eq));
        if (keys.size() != 1) c.fail("dotted keys in assignments are not supported");
        rest.remove_prefix(eq + 1);
        skip_blanks(c, rest);
        Value v = parse_scalar(c, rest);
        skip_blanks(c, rest);
        if (!rest.empty() && rest.front() != '#')
          c.fail("trailing characters after value");
        if (current->values.count(keys[0]))
          c.fail("duplicate key '" + keys[0] + "'");
        current->values.emplace(keys[0], std::move(v));
      }
    }

    if (eol == std::string_view::npos) break;
    pos = eol + 1;
    ++c.line;
  }
  return root;
}

}  // namespace afd::toml
