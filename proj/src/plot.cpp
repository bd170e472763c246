#include "hk/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

namespace hk::plot {

namespace {

constexpr double width = 800.0, height = 600.0;
constexpr double left = 80.0, right = 160.0, top = 50.0, bottom = 60.0;
constexpr double plot_w = width - left - right, plot_h = height - top - bottom;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string row_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double cell(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw SchemaError("non-numeric cell '" + s + "'");
  return v;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '-': out += (!out.empty() && out.back() == '-') ? " -" : "-"; break;  // no "--" in comments
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double px_lo, double px_hi) const {
    double a = lo, b = hi, x = v;
    if (log) {
      a = std::log10(a);
      b = std::log10(b);
      x = std::log10(std::max(v, lo));
    }
    const double f = (b > a) ? (x - a) / (b - a) : 0.5;
    return px_lo + f * (px_hi - px_lo);
  }
};

Axis make_axis(double lo, double hi, bool log) {
  if (log) {
    lo = std::max(lo, hi * 1e-6);
    if (!(lo > 0.0)) lo = 1e-6;
  }
  if (hi == lo) {
    hi = lo + 1.0;
  }
  return {lo, hi, log};
}

std::string header(const Options& opt, std::string_view kind) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<!-- hk-plot kind=" << kind;
  if (!opt.metadata.empty()) os << ' ' << escape(opt.metadata);
  os << " -->\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    os << "<text x=\"" << num(width / 2) << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"16\">" << escape(opt.title) << "</text>\n";
  return os.str();
}

void frame(std::ostringstream& os, const Axis& xa, const Axis& ya, std::string_view xlabel,
           std::string_view ylabel) {
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w) << "\" height=\""
     << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double xv = xa.log ? std::pow(10.0, std::log10(xa.lo) + f * (std::log10(xa.hi) - std::log10(xa.lo)))
                             : xa.lo + f * (xa.hi - xa.lo);
    const double yv = ya.lo + f * (ya.hi - ya.lo);
    const double px = left + f * plot_w, py = top + plot_h - f * plot_h;
    char lx[32], ly[32];
    std::snprintf(lx, sizeof lx, "%.3g", xv);
    std::snprintf(ly, sizeof ly, "%.3g", yv);
    os << "<text x=\"" << num(px) << "\" y=\"" << num(top + plot_h + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << lx << "</text>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << ly << "</text>\n";
  }
  os << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(height - 15)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(xlabel) << "</text>\n";
  os << "<text x=\"20\" y=\"" << num(top + plot_h / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"13\" transform=\"rotate(-90 20 " << num(top + plot_h / 2) << ")\">" << escape(ylabel)
     << "</text>\n";
}

// Piecewise-linear viridis approximation on [0, 1].
std::string color(double v) {
  static constexpr std::array<std::array<int, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  v = std::clamp(v, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(v));
  const double f = v - i;
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

const char* palette(std::size_t i) {
  static constexpr std::array<const char*, 8> p{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  return p[i % p.size()];
}

}  // namespace

Kind kind_from_string(std::string_view s) {
  if (s == "heatmap") return Kind::heatmap;
  if (s == "lines") return Kind::lines;
  if (s == "trajectory") return Kind::trajectory;
  throw std::invalid_argument("kind: expected heatmap, lines or trajectory");
}

std::string heatmap_svg(const util::CsvTable& table, const Options& opt) {
  const int cR = table.column("R"), cS = table.column("sigma"), cQ = table.column("Q_mean");
  if (cR < 0 || cS < 0 || cQ < 0) throw SchemaError("heatmap needs columns R, sigma, Q_mean");
  if (table.rows.empty()) throw SchemaError("heatmap: table has no rows");

  std::map<std::pair<double, double>, std::pair<double, int>> cells;
  std::vector<double> Rs, Ss;
  for (const auto& row : table.rows) {
    const double R = cell(row[cR]), S = cell(row[cS]), Q = cell(row[cQ]);
    auto& [sum, n] = cells[{R, S}];
    sum += Q;
    ++n;
    Rs.push_back(R);
    Ss.push_back(S);
  }
  std::sort(Rs.begin(), Rs.end());
  Rs.erase(std::unique(Rs.begin(), Rs.end()), Rs.end());
  std::sort(Ss.begin(), Ss.end());
  Ss.erase(std::unique(Ss.begin(), Ss.end()), Ss.end());

  std::ostringstream os;
  os << header(opt, "heatmap");
  const double cw = plot_w / static_cast<double>(Rs.size());
  const double ch = plot_h / static_cast<double>(Ss.size());
  for (const auto& [key, acc] : cells) {
    const auto ix = std::lower_bound(Rs.begin(), Rs.end(), key.first) - Rs.begin();
    const auto iy = std::lower_bound(Ss.begin(), Ss.end(), key.second) - Ss.begin();
    const double q = acc.first / acc.second;
    os << "<rect x=\"" << num(left + static_cast<double>(ix) * cw) << "\" y=\""
       << num(top + plot_h - static_cast<double>(iy + 1) * ch) << "\" width=\"" << num(cw) << "\" height=\""
       << num(ch) << "\" fill=\"" << color(q) << "\"><title>R=" << row_label(key.first) << " sigma="
       << row_label(key.second) << " Q=" << num(q) << "</title></rect>\n";
  }
  const Axis xa = make_axis(Rs.front(), Rs.back(), false);
  const Axis ya = make_axis(Ss.front(), Ss.back(), false);
  frame(os, xa, ya, "R", "sigma");
  // Colour bar for Q in [0, 1].
  for (int i = 0; i < 20; ++i) {
    const double y = top + plot_h - (i + 1) * plot_h / 20.0;
    os << "<rect x=\"" << num(width - right + 30) << "\" y=\"" << num(y) << "\" width=\"20\" height=\""
       << num(plot_h / 20.0 + 0.5) << "\" fill=\"" << color((i + 0.5) / 20.0) << "\"/>\n";
  }
  os << "<text x=\"" << num(width - right + 58) << "\" y=\"" << num(top + 10)
     << "\" font-family=\"sans-serif\" font-size=\"11\">Q=1</text>\n";
  os << "<text x=\"" << num(width - right + 58) << "\" y=\"" << num(top + plot_h)
     << "\" font-family=\"sans-serif\" font-size=\"11\">Q=0</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string lines_svg(const util::CsvTable& table, const Options& opt) {
  if (table.header.size() < 2) throw SchemaError("lines needs an x column and at least one series");
  if (table.rows.empty()) throw SchemaError("lines: table has no rows");
  std::vector<double> xs;
  std::vector<std::vector<double>> ys(table.header.size() - 1);
  for (const auto& row : table.rows) {
    xs.push_back(cell(row[0]));
    for (std::size_t c = 1; c < row.size(); ++c) ys[c - 1].push_back(cell(row[c]));
  }
  double ylo = ys[0][0], yhi = ys[0][0];
  for (const auto& s : ys)
    for (double v : s) {
      ylo = std::min(ylo, v);
      yhi = std::max(yhi, v);
    }
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const Axis xa = make_axis(*xmin, *xmax, opt.log_x);
  const Axis ya = make_axis(ylo, yhi, false);

  std::ostringstream os;
  os << header(opt, "lines");
  frame(os, xa, ya, table.header[0], table.header.size() == 2 ? table.header[1] : "value");
  for (std::size_t c = 0; c < ys.size(); ++c) {
    os << "<polyline fill=\"none\" stroke=\"" << palette(c) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) os << ' ';
      os << num(xa.map(xs[i], left, left + plot_w)) << ',' << num(ya.map(ys[c][i], top + plot_h, top));
    }
    os << "\"/>\n";
    const double ly = top + 14.0 + 18.0 * static_cast<double>(c);
    os << "<line x1=\"" << num(width - right + 10) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
       << num(width - right + 30) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << palette(c) << "\"/>\n";
    os << "<text x=\"" << num(width - right + 34) << "\" y=\"" << num(ly)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(table.header[c + 1]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string trajectory_svg(const util::CsvTable& table, const Options& opt) {
  if (table.header.size() < 2 || table.header[0] != "t" || table.header[1] != "x0")
    throw SchemaError("trajectory needs columns t,x0,x1,...");
  if (table.rows.empty()) throw SchemaError("trajectory: table has no rows");
  const std::size_t agents = table.header.size() - 1;
  std::vector<double> ts;
  std::vector<std::vector<double>> xs(agents);
  for (const auto& row : table.rows) {
    ts.push_back(cell(row[0]));
    for (std::size_t a = 0; a < agents; ++a) xs[a].push_back(cell(row[a + 1]));
  }
  const double tmin = opt.log_x ? std::max(ts.front(), ts.back() * 1e-6) : ts.front();
  const Axis xa = make_axis(opt.log_x && tmin <= 0.0 ? 1e-6 : tmin, ts.back(), opt.log_x);
  const Axis ya = make_axis(0.0, 1.0, false);

  std::ostringstream os;
  os << header(opt, "trajectory");
  frame(os, xa, ya, opt.log_x ? "t (log)" : "t", "x");
  for (std::size_t a = 0; a < agents; ++a) {
    std::vector<std::string> pieces;
    std::string cur;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (opt.log_x && !(ts[i] > 0.0)) continue;
      if (i > 0 && std::fabs(xs[a][i] - xs[a][i - 1]) > 0.5 && !cur.empty()) {
        pieces.push_back(cur);
        cur.clear();
      }
      if (!cur.empty()) cur += ' ';
      cur += num(xa.map(ts[i], left, left + plot_w)) + ',' + num(ya.map(xs[a][i], top + plot_h, top));
    }
    if (!cur.empty()) pieces.push_back(cur);
    for (const auto& p : pieces)
      os << "<polyline fill=\"none\" stroke=\"" << palette(a) << "\" stroke-opacity=\"0.6\" stroke-width=\"0.8\" "
         << "points=\"" << p << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render(Kind kind, const util::CsvTable& table, const Options& opt) {
  switch (kind) {
    case Kind::heatmap: return heatmap_svg(table, opt);
    case Kind::lines: return lines_svg(table, opt);
    case Kind::trajectory: return trajectory_svg(table, opt);
  }
  throw std::invalid_argument("unknown plot kind");
}

}  // namespace hk::plot
