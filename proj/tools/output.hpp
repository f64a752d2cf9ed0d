#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cli {

/// Shortest round-trip decimal form; identical across runs and platforms.
std::string num(double x);
std::string num(long x);
std::string num(int x);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

using Header = std::vector<std::pair<std::string, std::string>>;

/// Fixed-column table; cells are numbers, strings or booleans.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void add(std::vector<nlohmann::json> row) { rows_.push_back(std::move(row)); }
  size_t size() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }

  void write_csv(std::ostream& os, const Header& header) const;
  /// {"header": {...}, "columns": [...], "rows": [{...}, ...]} plus extra members.
  void write_json(std::ostream& os, const Header& header, const nlohmann::json& extra = nullptr) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<nlohmann::json>> rows_;
};

std::string cell_text(const nlohmann::json& v);

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x, y;
  bool markers = false;
};

/// Line plot as a standalone SVG 1.1 document.
void svg_plot(std::ostream& os, const std::string& title, const std::string& xlabel, const std::string& ylabel,
              const std::vector<Series>& series, bool zero_line = false);

/// Heat map of integer codes on an nr x nxi grid (row i is r). Negative codes
/// get fixed grey levels.
void svg_heatmap(std::ostream& os, const std::string& title, const std::vector<long>& codes, int nr, int nxi,
                 double r_lo, double r_hi, double xi_lo, double xi_hi);

}  // namespace cli
