#pragma once

// Flat-file emission: deterministic CSV, the joint-amplitude dump format, and a
// dependency-free SVG line plot. All floating-point rendering goes through
// std::to_chars shortest round-trip form, so identical inputs give identical
// bytes and re-reading recovers the exact doubles.

#include <Eigen/Dense>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "sfwm/errors.hpp"
#include "sfwm/spectral.hpp"

namespace sfwm {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("parse_double: '" + s + "' is not a number");
  }
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("write_csv: cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
  if (!out) throw ValidationError("write_csv: write failed on '" + path + "'");
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("read_csv: cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (line.empty()) continue;
    if (header) {
      table.columns = std::move(cells);
      header = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

// Joint-amplitude dump: header line `# n_i n_s dOmega_i dOmega_s`, then n_i
// rows of n_s complex entries as `re im` pairs. Grids are symmetric about 0, so
// the axes reconstruct from the counts and steps alone.
inline void write_jsa(const std::string& path, const Jsa& jsa) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("write_jsa: cannot open '" + path + "' for writing");
  out << "# " << jsa.grid.n_idler() << " " << jsa.grid.n_signal() << " "
      << format_double(jsa.grid.d_idler()) << " " << format_double(jsa.grid.d_signal()) << "\n";
  for (int i = 0; i < jsa.grid.n_idler(); ++i) {
    for (int s = 0; s < jsa.grid.n_signal(); ++s) {
      const std::complex<double> v = jsa.amplitude(i, s);
      out << (s ? " " : "") << format_double(v.real()) << " " << format_double(v.imag());
    }
    out << "\n";
  }
  if (!out) throw ValidationError("write_jsa: write failed on '" + path + "'");
}

inline Jsa read_jsa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("read_jsa: cannot open '" + path + "'");
  std::string hash;
  int ni = 0, ns = 0;
  double di = 0.0, ds = 0.0;
  if (!(in >> hash >> ni >> ns >> di >> ds) || hash != "#")
    throw ValidationError("read_jsa: '" + path + "' lacks the '# n_i n_s dOmega_i dOmega_s' header");
  if (ni < 2 || ns < 2 || di <= 0.0 || ds <= 0.0)
    throw ValidationError("read_jsa: '" + path + "' header values out of range");
  Jsa jsa{SpectralGrid::symmetric(ni, di * (ni - 1) / 2.0, ns, ds * (ns - 1) / 2.0),
          Eigen::MatrixXcd(ni, ns)};
  for (int i = 0; i < ni; ++i)
    for (int s = 0; s < ns; ++s) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im))
        throw ValidationError("read_jsa: '" + path + "' truncated at row " + std::to_string(i));
      jsa.amplitude(i, s) = {re, im};
    }
  return jsa;
}

// Minimal static line plot. Series are polylines on a common linear scale with
// a small legend; a verification aid, not a plotting product.
struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

inline void write_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series) {
  if (series.empty()) throw ValidationError("write_svg: nothing to plot");
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_min = x_max = x;
        y_min = y_max = y;
        first = false;
      }
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (first) throw ValidationError("write_svg: series contain no points");
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  const double pad_y = 0.05 * (y_max - y_min);
  y_min -= pad_y;
  y_max += pad_y;

  const int width = 720, height = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  const auto px = [&](double x) {
    return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr);
  };
  const auto py = [&](double y) {
    return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("write_svg: cannot open '" + path + "' for writing");
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                ml, mt, width - ml - mr, height - mt - mb);
  out << buf;
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << title << "</text>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 "
      << 16 << " " << height / 2 << ")\">" << y_label << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_min + k * (x_max - x_min) / 4.0;
    const double yv = y_min + k * (y_max - y_min) / 4.0;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                  "font-size=\"10\">%.4g</text>\n",
                  px(xv), height - mb + 16, xv);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\" font-family=\"sans-serif\" "
                  "font-size=\"10\">%.4g</text>\n",
                  ml - 6, py(yv) + 3, yv);
    out << buf;
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[i % 8] << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[i].points) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(x), py(y));
      out << buf;
    }
    out << "\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%d\" y1=\"%zu\" x2=\"%d\" y2=\"%zu\" stroke=\"%s\" "
                  "stroke-width=\"2\"/>\n",
                  width - mr - 150, mt + 14 + 16 * i, width - mr - 130, mt + 14 + 16 * i,
                  colors[i % 8]);
    out << buf;
    out << "<text x=\"" << width - mr - 125 << "\" y=\"" << mt + 18 + 16 * i
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[i].label << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw ValidationError("write_svg: write failed on '" + path + "'");
}

}  // namespace sfwm
