#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "snls/errors.hpp"
#include "snls/io.hpp"

namespace snls {

/// Minimal SVG line plot of one or more series over a shared abscissa.
inline void write_svg_lineplot(const std::filesystem::path& path,
                               const std::vector<double>& x,
                               const std::vector<std::vector<double>>& ys,
                               const std::vector<std::string>& labels,
                               const std::string& title = "") {
  if (x.empty() || ys.empty()) throw FormatError("svg plot: empty data");
  const int W = 720, H = 440, ml = 70, mr = 20, mt = 36, mb = 46;
  double xmin = x.front(), xmax = x.front();
  for (double v : x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  double ymin = ys[0][0], ymax = ys[0][0];
  for (const auto& s : ys)
    for (double v : s) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto px = [&](double v) {
    return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto py = [&](double v) {
    return H - mb - (v - ymin) / (ymax - ymin) * (H - mt - mb);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};
  std::ofstream os(path);
  if (!os) throw FormatError("svg plot: cannot open " + path.string());
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
     << "' height='" << H << "'>\n"
     << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr
     << "' y2='" << H - mb << "' stroke='black'/>\n";
  os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
     << H - mb << "' stroke='black'/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    os << "<text x='" << px(xv) << "' y='" << H - mb + 18
       << "' font-size='11' text-anchor='middle'>" << format_full(xv).substr(0, 9)
       << "</text>\n";
    os << "<text x='" << ml - 6 << "' y='" << py(yv) + 4
       << "' font-size='11' text-anchor='end'>" << format_full(yv).substr(0, 9)
       << "</text>\n";
  }
  if (!title.empty())
    os << "<text x='" << W / 2 << "' y='" << mt - 14
       << "' font-size='14' text-anchor='middle'>" << title << "</text>\n";
  for (std::size_t s = 0; s < ys.size(); ++s) {
    os << "<polyline fill='none' stroke='" << colors[s % 6]
       << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < x.size() && i < ys[s].size(); ++i)
      os << px(x[i]) << "," << py(ys[s][i]) << " ";
    os << "'/>\n";
    if (s < labels.size())
      os << "<text x='" << W - mr - 140 << "' y='" << mt + 16 * (s + 1)
         << "' font-size='12' fill='" << colors[s % 6] << "'>" << labels[s]
         << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace snls
