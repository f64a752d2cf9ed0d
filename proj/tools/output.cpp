#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

namespace cli {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string num(long x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  if (v.is_number()) return num(v.get<double>());
  if (v.is_null()) return "nan";
  return v.dump();
}

void Table::write_csv(std::ostream& os, const Header& header) const {
  for (const auto& [k, v] : header) os << "# " << k << ": " << v << "\n";
  for (size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_field(columns_[i]);
  os << "\n";
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
    os << "\n";
  }
}

void Table::write_json(std::ostream& os, const Header& header, const nlohmann::json& extra) const {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json h = nlohmann::ordered_json::object();
  for (const auto& [k, v] : header) h[k] = v;
  doc["header"] = h;
  doc["columns"] = columns_;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json o;
    for (size_t i = 0; i < row.size() && i < columns_.size(); ++i) o[columns_[i]] = row[i];
    rows.push_back(o);
  }
  doc["rows"] = rows;
  if (extra.is_object())
    for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
  os << doc.dump(2) << "\n";
}

namespace {

constexpr double W = 720, H = 480, ML = 80, MR = 150, MT = 40, MB = 60;

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string fix(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

void open_svg(std::ostream& os, double w, double h, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << esc(title) << "</text>\n";
}

void axes(std::ostream& os, double x0, double x1, double y0, double y1, const std::string& xl, const std::string& yl) {
  const double pw = W - ML - MR, ph = H - MT - MB;
  os << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double fx = ML + pw * i / 4, fy = MT + ph * (4 - i) / 4;
    os << "<text x=\"" << fix(fx) << "\" y=\"" << fix(MT + ph + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick(x0 + (x1 - x0) * i / 4)
       << "</text>\n";
    os << "<text x=\"" << fix(ML - 6) << "\" y=\"" << fix(fy + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick(y0 + (y1 - y0) * i / 4)
       << "</text>\n";
  }
  os << "<text x=\"" << fix(ML + pw / 2) << "\" y=\"" << fix(H - 16)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << esc(xl) << "</text>\n";
  os << "<text x=\"18\" y=\"" << fix(MT + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"13\" transform=\"rotate(-90 18 " << fix(MT + ph / 2) << ")\">" << esc(yl) << "</text>\n";
}

void range(double& lo, double& hi) {
  if (!(hi > lo)) {
    double c = std::isfinite(lo) ? lo : 0;
    lo = c - 1;
    hi = c + 1;
  }
  double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

}  // namespace

void svg_plot(std::ostream& os, const std::string& title, const std::string& xlabel, const std::string& ylabel,
              const std::vector<Series>& series, bool zero_line) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  range(x0, x1);
  range(y0, y1);
  const double pw = W - ML - MR, ph = H - MT - MB;
  auto px = [&](double x) { return ML + pw * (x - x0) / (x1 - x0); };
  auto py = [&](double y) { return MT + ph * (y1 - y) / (y1 - y0); };

  open_svg(os, W, H, title);
  axes(os, x0, x1, y0, y1, xlabel, ylabel);
  if (zero_line && y0 < 0 && y1 > 0)
    os << "<line x1=\"" << fix(ML) << "\" y1=\"" << fix(py(0)) << "\" x2=\"" << fix(ML + pw) << "\" y2=\""
       << fix(py(0)) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << fix(px(s.x[i])) << "," << fix(py(s.y[i])) << " ";
    os << "\"/>\n";
    if (s.markers)
      for (size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
          os << "<circle cx=\"" << fix(px(s.x[i])) << "\" cy=\"" << fix(py(s.y[i])) << "\" r=\"2.5\" fill=\""
             << s.color << "\"/>\n";
    double ly = MT + 16 + 18 * k;
    os << "<line x1=\"" << fix(W - MR + 12) << "\" y1=\"" << fix(ly) << "\" x2=\"" << fix(W - MR + 32) << "\" y2=\""
       << fix(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fix(W - MR + 36) << "\" y=\"" << fix(ly + 4)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << esc(s.label) << "</text>\n";
  }
  os << "</svg>\n";
}

void svg_heatmap(std::ostream& os, const std::string& title, const std::vector<long>& codes, int nr, int nxi,
                 double r_lo, double r_hi, double xi_lo, double xi_hi) {
  std::set<long> symbols;
  for (long c : codes)
    if (c >= 0) symbols.insert(c);
  // colour by rank of log symbol so that wide symbol ranges stay readable
  long smin = symbols.empty() ? 0 : *symbols.begin();
  long smax = symbols.empty() ? 1 : *symbols.rbegin();
  double lmin = std::log1p(static_cast<double>(smin)), lmax = std::log1p(static_cast<double>(smax));
  auto colour = [&](long c) -> std::string {
    if (c == -1) return "#ffffff";
    if (c == -2) return "#bbbbbb";
    if (c < 0) return "#000000";
    double t = lmax > lmin ? (std::log1p(static_cast<double>(c)) - lmin) / (lmax - lmin) : 0.5;
    int rr = static_cast<int>(255 * std::clamp(1.5 * t, 0.0, 1.0));
    int gg = static_cast<int>(255 * std::clamp(1.5 * t - 0.5, 0.0, 1.0));
    int bb = static_cast<int>(255 * std::clamp(0.6 - 0.6 * t + std::max(0.0, 3 * t - 2), 0.0, 1.0));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rr, gg, bb);
    return buf;
  };
  const double pw = W - ML - MR, ph = H - MT - MB;
  open_svg(os, W, H, title);
  double cw = pw / nxi, ch = ph / nr;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nxi; ++j)
      os << "<rect x=\"" << fix(ML + cw * j) << "\" y=\"" << fix(MT + ph - ch * (i + 1)) << "\" width=\""
         << fix(cw + 0.05) << "\" height=\"" << fix(ch + 0.05) << "\" fill=\""
         << colour(codes[static_cast<size_t>(i) * nxi + j]) << "\"/>\n";
  axes(os, xi_lo, xi_hi, r_lo, r_hi, "xi0", "r0");
  const std::vector<std::pair<std::string, std::string>> legend = {
      {colour(smin), "a1 = " + std::to_string(smin)},
      {colour(smax), "a1 = " + std::to_string(smax)},
      {"#ffffff", "escape"},
      {"#bbbbbb", "horizon"},
      {"#000000", "invalid"}};
  for (size_t k = 0; k < legend.size(); ++k) {
    double ly = MT + 10 + 18 * k;
    os << "<rect x=\"" << fix(W - MR + 12) << "\" y=\"" << fix(ly) << "\" width=\"12\" height=\"12\" fill=\""
       << legend[k].first << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fix(W - MR + 30) << "\" y=\"" << fix(ly + 10)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << esc(legend[k].second) << "</text>\n";
  }
  os << "<text x=\"" << fix(W - MR + 12) << "\" y=\"" << fix(MT + 120)
     << "\" font-family=\"sans-serif\" font-size=\"11\">" << symbols.size() << " symbols</text>\n";
  os << "</svg>\n";
}

}  // namespace cli
