#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "oaxaca/dataset.hpp"

namespace oaxaca {

/// RFC-4180 style dialect: header row, configurable delimiter, quoted fields
/// with doubled quotes, CR/LF tolerant. Cells equal to any sentinel (empty
/// string by default) load as missing.
struct CsvOptions {
  char delimiter = ',';
  std::vector<std::string> missing_sentinels = {""};
};

Dataset read_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset read_csv_text(std::string_view text, const CsvOptions& options = {});

void write_csv(const Dataset& data, const std::filesystem::path& path);
std::string write_csv_text(const Dataset& data);

}  // namespace oaxaca
