#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace wqed::cli {

/// Filesystem problem the user can act on (unwritable directory, failed write).
class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string format_number(double value);  // 17 significant digits, locale-free

/// Row-oriented table writer: one file per table, CSV or NDJSON. All numbers
/// go through format_number so identical runs produce identical bytes.
class TableWriter {
public:
  TableWriter(std::filesystem::path dir, std::string stem, Format format,
              std::vector<std::string> columns);

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);  // pre-rendered cells
  std::string close();  // flushes and returns the file name

private:
  std::filesystem::path path_;
  std::string file_name_;
  Format format_;
  std::vector<std::string> columns_;
  std::string buffer_;
  bool closed_ = false;
};

void ensure_directory(const std::filesystem::path& dir);

}  // namespace wqed::cli
