#include "vclab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace vclab {

CsvWriter::CsvWriter(std::filesystem::path path, std::vector<std::string> header)
    : path_(std::move(path)), header_(std::move(header)) {}

std::string CsvWriter::format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  std::string line;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_full(values[i]);
  }
  lines_.push_back(std::move(line));
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  std::string line;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += values[i];
  }
  lines_.push_back(std::move(line));
}

void CsvWriter::flush() {
  if (!path_.parent_path().empty()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_);
  for (size_t i = 0; i < header_.size(); ++i) {
    if (i) out << ',';
    out << header_[i];
  }
  out << '\n';
  for (const auto& l : lines_) out << l << '\n';
  flushed_ = true;
}

CsvWriter::~CsvWriter() {
  if (!flushed_) {
    try {
      flush();
    } catch (...) {
    }
  }
}

void write_gnuplot_script(const std::filesystem::path& csv_path, int xcol, int ycol,
                          const std::string& xlabel, const std::string& ylabel,
                          const std::string& title) {
  std::filesystem::path gp = csv_path;
  gp.replace_extension(".gp");
  std::ofstream out(gp);
  out << "# gnuplot script, run: gnuplot -p " << gp.filename().string() << "\n";
  out << "set datafile separator ','\n";
  out << "set key off\n";
  out << "set title '" << title << "'\n";
  out << "set xlabel '" << xlabel << "'\n";
  out << "set ylabel '" << ylabel << "'\n";
  out << "plot '" << csv_path.filename().string() << "' using " << xcol << ":" << ycol
      << " skip 1 with linespoints pt 7\n";
}

}  // namespace vclab
