#include "windscen/csv.hpp"

#include <cstdlib>
#include <stdexcept>

namespace windscen {

CsvReader::CsvReader(const std::string& path) : in_(path), path_(path) {
  if (!in_) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    split_csv(line, ',', header_);
    return;
  }
  throw std::runtime_error("empty file (no header): " + path);
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    split_csv(line, ',', fields);
    return true;
  }
  return false;
}

void split_csv(const std::string& line, char sep, std::vector<std::string>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double_field(const std::string& s, const CsvReader& r) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("malformed numeric field '" + s + "' at " +
                                r.path() + ":" + std::to_string(r.line_number()));
  }
  return v;
}

long parse_long_field(const std::string& s, const CsvReader& r) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("malformed integer field '" + s + "' at " +
                                r.path() + ":" + std::to_string(r.line_number()));
  }
  return v;
}

}  // namespace windscen
