#include "spdc_cli/output.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "spdc/errors.hpp"

namespace spdc::cli {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.10g}", v);
}

CsvWriter::CsvWriter(std::string_view config_hash, const std::vector<std::string>& header) : columns_(header.size()) {
  text_ = fmt::format("# config-hash: {}\n{}\n", config_hash, fmt::join(header, ","));
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("csv row has the wrong number of cells");
  text_ += fmt::format("{}\n", fmt::join(cells, ","));
  ++rows_;
}

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(std::string_view title, std::string_view x_label, std::string_view y_label) {
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      kWidth, kHeight);
  s += fmt::format("<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", kWidth / 2,
                   escape(title));
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                   kLeft + (kWidth - kLeft - kRight) / 2, kHeight - 15, escape(x_label));
  s += fmt::format("<text x=\"18\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.1f})\">{1}</text>\n",
                   kTop + (kHeight - kTop - kBottom) / 2, escape(y_label));
  return s;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo <= 1e-300) {
      const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
      lo -= pad;
      hi += pad;
    }
  }
  double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

std::string axes(const Range& x, const Range& y) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::string s = fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"black\"/>\n", x0,
      y1, x1 - x0, y0 - y1);
  for (int k = 0; k <= 4; ++k) {
    const double xv = x.lo + (x.hi - x.lo) * k / 4.0;
    const double yv = y.lo + (y.hi - y.lo) * k / 4.0;
    const double px = x.map(xv, x0, x1), py = y.map(yv, y0, y1);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.4g}</text>\n", px, y0 + 16, xv);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.4g}</text>\n", x0 - 4, py + 4, yv);
  }
  return s;
}

}  // namespace

std::string svg_lines(const std::vector<Series>& series, std::string_view x_label, std::string_view y_label,
                      std::string_view title) {
  Range xr, yr;
  for (const Series& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k)
      if (std::isfinite(s.y[k])) {
        xr.add(s.x[k]);
        yr.add(s.y[k]);
      }
  xr.finish();
  yr.finish();
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::string out = header(title, x_label, y_label) + axes(xr, yr);
  for (std::size_t n = 0; n < series.size(); ++n) {
    const Series& s = series[n];
    const char* color = kPalette[n % std::size(kPalette)];
    std::string points;
    auto flush = [&] {
      if (!points.empty())
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
                           points);
      points.clear();
    };
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.y[k])) {
        flush();
        continue;
      }
      const double px = xr.map(s.x[k], x0, x1), py = yr.map(s.y[k], y0, y1);
      points += fmt::format("{}{:.2f},{:.2f}", points.empty() ? "" : " ", px, py);
      out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n", px, py, color);
    }
    flush();
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" fill=\"{}\">{}</text>\n", x0 + 10, y1 + 16 + 14.0 * n, color,
                       escape(s.label));
  }
  return out + "</svg>\n";
}

std::string svg_heatmap(const std::vector<double>& first, const std::vector<double>& second,
                        const std::vector<double>& values, std::string_view first_label,
                        std::string_view second_label, std::string_view title) {
  Range xr, yr;
  for (double v : first) xr.add(v);
  for (double v : second) yr.add(v);
  double vmax = 0.0;
  for (double v : values)
    if (std::isfinite(v)) vmax = std::max(vmax, v);
  xr.finish();
  yr.finish();
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double cw = (x1 - x0) / static_cast<double>(first.size());
  const double ch = (y0 - y1) / static_cast<double>(second.size());

  std::string out = header(title, first_label, second_label);
  for (std::size_t i = 0; i < first.size(); ++i)
    for (std::size_t j = 0; j < second.size(); ++j) {
      const double v = values[i * second.size() + j];
      const double t = vmax > 0.0 && std::isfinite(v) ? std::clamp(v / vmax, 0.0, 1.0) : 0.0;
      const int g = static_cast<int>(std::lround(255.0 * (1.0 - t)));
      out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#{:02x}{:02x}{:02x}\"/>\n",
                         x0 + cw * static_cast<double>(i), y0 - ch * static_cast<double>(j + 1), cw + 0.05, ch + 0.05,
                         g, g, g);
    }
  return out + axes(xr, yr) + "</svg>\n";
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'", "--out");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ValidationError("cannot write '" + path.string() + "'", "--out");
}

}  // namespace spdc::cli
