#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vclab {

/// CSV emitter with a fixed header, full-precision decimal serialization
/// (17 significant digits), and a companion self-contained gnuplot script.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, std::vector<std::string> header);

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  /// Flushes buffered rows to disk (also called by the destructor).
  void flush();
  ~CsvWriter();

  const std::filesystem::path& path() const { return path_; }
  static std::string format_full(double v);

 private:
  std::filesystem::path path_;
  std::vector<std::string> header_;
  std::vector<std::string> lines_;
  bool flushed_ = false;
};

/// Writes `<csv_stem>.gp` next to the CSV: a gnuplot script plotting column
/// ycol against xcol (1-based), with axis labels.
void write_gnuplot_script(const std::filesystem::path& csv_path, int xcol, int ycol,
                          const std::string& xlabel, const std::string& ylabel,
                          const std::string& title);

}  // namespace vclab
