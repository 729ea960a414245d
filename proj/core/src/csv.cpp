#include "oaxaca/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "oaxaca/errors.hpp"

namespace oaxaca {

namespace {

bool is_missing(const std::string& cell, const CsvOptions& options) {
  return std::find(options.missing_sentinels.begin(),
                   options.missing_sentinels.end(),
                   cell) != options.missing_sentinels.end();
}

std::vector<std::vector<std::string>> parse_records(std::string_view text,
                                                    char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\r') {
      // swallowed; the following '\n' (if any) ends the record
      if (i + 1 >= text.size() || text[i + 1] != '\n') {
        end_record();
        ++line;
      }
    } else if (c == '\n') {
      end_record();
      ++line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes)
    throw IoError(fmt::format("csv: unterminated quoted field (line {})", line));
  if (field_started || !record.empty()) end_record();
  return records;
}

}  // namespace

Dataset read_csv_text(std::string_view text, const CsvOptions& options) {
  auto records = parse_records(text, options.delimiter);
  if (records.empty()) throw IoError("csv: no header row");
  Dataset data;
  data.columns = records.front();
  data.rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& record = records[r];
    if (record.size() != data.columns.size())
      throw IoError(fmt::format(
          "csv: line {} has {} fields, expected {}", r + 1, record.size(),
          data.columns.size()));
    std::vector<std::optional<std::string>> row;
    row.reserve(record.size());
    for (auto& cell : record) {
      if (is_missing(cell, options)) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(std::move(cell));
      }
    }
    data.rows.push_back(std::move(row));
  }
  return data;
}

Dataset read_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError(fmt::format("csv: cannot open '{}' for reading", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad())
    throw IoError(fmt::format("csv: read failure on '{}'", path.string()));
  return read_csv_text(buffer.str(), options);
}

namespace {

void write_field(std::string& out, const std::string& value) {
  const bool needs_quotes =
      value.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) {
    out += value;
    return;
  }
  out.push_back('"');
  for (const char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

std::string write_csv_text(const Dataset& data) {
  std::string out;
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    if (c > 0) out.push_back(',');
    write_field(out, data.columns[c]);
  }
  out.push_back('\n');
  for (const auto& row : data.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out.push_back(',');
      if (row[c].has_value()) write_field(out, *row[c]);
    }
    out.push_back('\n');
  }
  return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError(fmt::format("csv: cannot open '{}' for writing", path.string()));
  out << write_csv_text(data);
  if (!out)
    throw IoError(fmt::format("csv: write failure on '{}'", path.string()));
}

}  // namespace oaxaca
