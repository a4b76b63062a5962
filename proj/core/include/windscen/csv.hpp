#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace windscen {

/// Line-oriented CSV reader. Leading lines starting with '#' are treated as
/// embedded metadata comments and skipped; the first remaining line is the
/// header. No quoting support: the file schemas in this project never embed
/// commas in fields.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path);

  /// Header fields (validated by the caller).
  const std::vector<std::string>& header() const { return header_; }

  /// Reads the next record into `fields`. Returns false at EOF.
  bool next(std::vector<std::string>& fields);

  /// 1-based line number of the record most recently returned.
  long line_number() const { return line_; }

  const std::string& path() const { return path_; }

 private:
  std::ifstream in_;
  std::string path_;
  std::vector<std::string> header_;
  long line_ = 0;
};

void split_csv(const std::string& line, char sep, std::vector<std::string>& out);

/// Parses a decimal field; throws std::invalid_argument with file/line context.
double parse_double_field(const std::string& s, const CsvReader& r);
long parse_long_field(const std::string& s, const CsvReader& r);

}  // namespace windscen
