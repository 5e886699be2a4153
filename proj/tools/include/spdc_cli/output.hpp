#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spdc::cli {

/// Shortest round-trippable fixed formatting used for every CSV number.
std::string num(double v);

class CsvWriter {
 public:
  CsvWriter(std::string_view config_hash, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }
  std::size_t rows() const { return rows_; }

 private:
  std::string text_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line chart. Non-finite points break the line.
std::string svg_lines(const std::vector<Series>& series, std::string_view x_label, std::string_view y_label,
                      std::string_view title);

/// Grayscale heat map of a row-major field (rows along `first`).
std::string svg_heatmap(const std::vector<double>& first, const std::vector<double>& second,
                        const std::vector<double>& values, std::string_view first_label,
                        std::string_view second_label, std::string_view title);

void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace spdc::cli
