#include "run_output.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

namespace wqed::cli {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw io_error("cannot create output directory '" + dir.string() + "'" +
                   (ec ? ": " + ec.message() : ""));
}

TableWriter::TableWriter(std::filesystem::path dir, std::string stem, Format format,
                         std::vector<std::string> columns)
    : format_(format), columns_(std::move(columns)) {
  file_name_ = stem + (format_ == Format::csv ? ".csv" : ".ndjson");
  path_ = dir / file_name_;
  if (format_ == Format::csv) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) buffer_ += ',';
      buffer_ += columns_[i];
    }
    buffer_ += '\n';
  }
}

void TableWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row_mixed(cells);
}

void TableWriter::row_mixed(const std::vector<std::string>& values) {
  if (values.size() != columns_.size())
    throw std::logic_error("TableWriter: cell count mismatch");
  if (format_ == Format::csv) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) buffer_ += ',';
      buffer_ += values[i];
    }
    buffer_ += '\n';
  } else {
    buffer_ += '{';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) buffer_ += ',';
      buffer_ += '"';
      buffer_ += columns_[i];
      buffer_ += "\":";
      // numbers stay bare; anything non-numeric is quoted
      const std::string& v = values[i];
      const bool numeric = !v.empty() && (std::isdigit(v.front()) || v.front() == '-' ||
                                          v.front() == '+' || v.front() == '.');
      if (numeric)
        buffer_ += v;
      else
        buffer_ += '"' + v + '"';
    }
    buffer_ += "}\n";
  }
}

std::string TableWriter::close() {
  if (closed_) return file_name_;
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw io_error("cannot write '" + path_.string() + "'");
  out << buffer_;
  out.close();
  if (!out) throw io_error("failed while writing '" + path_.string() + "'");
  closed_ = true;
  return file_name_;
}

}  // namespace wqed::cli
