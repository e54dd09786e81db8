#include "sparse/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sparse {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kMarginX = 40.0;
constexpr double kMarginY = 30.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void write_stem_svg(const std::filesystem::path& path, const std::vector<StemSeries>& series,
                    const std::string& title) {
  std::size_t count = 0;
  double peak = 0.0;
  for (const auto& s : series) {
    count = std::max(count, s.values.size());
    for (double v : s.values) peak = std::max(peak, std::abs(v));
  }
  if (peak == 0.0) peak = 1.0;

  const double plot_w = kWidth - 2.0 * kMarginX;
  const double plot_h = kHeight - 2.0 * kMarginY;
  const double y0 = kMarginY + plot_h / 2.0;  // value 0 baseline
  const auto x_at = [&](std::size_t i) {
    return count > 1 ? kMarginX + plot_w * static_cast<double>(i) / (count - 1)
                     : kMarginX + plot_w / 2.0;
  };
  const auto y_at = [&](double v) { return y0 - (v / peak) * (plot_h / 2.0); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_stem_svg: cannot open " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 400\">\n";
  out << "<rect width=\"800\" height=\"400\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"18\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
  out << "<line x1=\"" << fmt(kMarginX) << "\" y1=\"" << fmt(y0) << "\" x2=\""
      << fmt(kWidth - kMarginX) << "\" y2=\"" << fmt(y0)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  double legend_x = kMarginX;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const double x = x_at(i);
      const double y = y_at(s.values[i]);
      out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x)
          << "\" y2=\"" << fmt(y) << "\" stroke=\"" << s.color << "\" stroke-width=\"1\"/>\n";
      out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"3\" fill=\"none\" "
          << "stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
    }
    if (!s.label.empty()) {
      out << "<text x=\"" << fmt(legend_x) << "\" y=\"" << fmt(kHeight - 8.0)
          << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << s.color << "\">"
          << s.label << "</text>\n";
      legend_x += 120.0;
    }
  }
  out << "</svg>\n";
}

}  // namespace sparse
