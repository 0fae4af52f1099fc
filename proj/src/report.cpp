#include "afdsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace afd {

std::string fmt_usd(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt_sig3(double v) {
  if (v == 0.0) return "0";
  if (!std::isfinite(v)) return v > 0 ? "inf" : (std::isnan(v) ? "nan" : "-inf");
  char buf[64];
  const double mag = std::fabs(v);
  if (mag >= 1e-3 && mag < 1e7) {
    // plain notation, rounded to 3 significant digits
    const int exp10 = static_cast<int>(std::floor(std::log10(mag)));
    const double scale = std::pow(10.0, exp10 - 2);
    const double rounded = std::round(v / scale) * scale;
    const int exp_r = static_cast<int>(std::floor(std::log10(std::fabs(rounded))));
    const int decimals = std::max(0, 2 - exp_r);
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, rounded);
  } else {
    std::snprintf(buf, sizeof(buf), "%.3g", v);
  }
  return buf;
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += csv_field(cells[i]);
  }
  out_ += '\n';
}

TableWriter::TableWriter(std::vector<std::string> header) {
  rows_.push_back(std::move(header));
}

void TableWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != rows_.front().size())
    throw std::logic_error("table row width mismatch");
  rows_.push_back(cells);
}

std::string TableWriter::str() const {
  std::vector<std::size_t> width(rows_.front().size(), 0);
  for (const auto& r : rows_)
    for (std::size_t i = 0; i < r.size(); ++i)
      width[i] = std::max(width[i], r[i].size());
  std::string out;
  for (std::size_t ri = 0; ri < rows_.size(); ++ri) {
    const auto& r = rows_[ri];
    for (std::size_t i = 0; i < r.size(); ++i) {
      out += r[i];
      if (i + 1 < r.size()) out.append(width[i] - r[i].size() + 2, ' ');
    }
    out += '\n';
    if (ri == 0) {
      for (std::size_t i = 0; i < width.size(); ++i) {
        out.append(width[i], '-');
        if (i + 1 < width.size()) out.append(2, ' ');
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace afd
