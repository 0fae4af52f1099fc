#pragma once

#include <string>
#include <vector>

namespace afd {

// Fixed-locale number formatting: USD to 3 decimals, everything else to
// 3 significant figures (plain notation for ordinary magnitudes).
std::string fmt_usd(double v);
std::string fmt_sig3(double v);
std::string fmt_full(double v);  // round-trippable, for machine output

// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return out_; }

 private:
  std::string out_;
  std::size_t columns_;
};

class TableWriter {
 public:
  explicit TableWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const;  // aligned columns

 private:
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace afd
