#include "sdc/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sdc/errors.hpp"

namespace sdc::csv {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

Document read_stream(std::istream& in, const std::string& origin) {
  Document doc;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (!have_header && t[0] == '#') continue;  // comments allowed before the header
    if (!have_header) {
      doc.header = split_line(t);
      have_header = true;
      continue;
    }
    doc.rows.push_back(split_line(t));
  }
  if (!have_header) throw ParseError(origin + ": no header row found");
  return doc;
}

Document read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_stream(in, path);
}

double parse_double(const std::string& cell, const std::string& context) {
  if (cell.empty()) throw ParseError(context + ": empty cell");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE)
    throw ParseError(context + ": not a number: '" + cell + "'");
  return v;
}

long long parse_int(const std::string& cell, const std::string& context) {
  if (cell.empty()) throw ParseError(context + ": empty cell");
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(cell.c_str(), &end, 10);
  if (end != cell.c_str() + cell.size() || errno == ERANGE)
    throw ParseError(context + ": not an integer: '" + cell + "'");
  return v;
}

Writer::Writer(const std::string& path) : path_(path) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot open " + path + " for writing");
  file_ = f;
}

Writer::~Writer() {
  if (file_) std::fclose(static_cast<FILE*>(file_));
}

void Writer::write_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line.push_back(',');
    line += cells[i];
  }
  write_line(line);
}

void Writer::write_line(const std::string& line) {
  if (!file_) throw IoError("write to closed file " + path_);
  FILE* f = static_cast<FILE*>(file_);
  if (std::fwrite(line.data(), 1, line.size(), f) != line.size() ||
      std::fputc('\n', f) == EOF)
    throw IoError("write failed on " + path_);
}

void Writer::close() {
  if (!file_) return;
  FILE* f = static_cast<FILE*>(file_);
  file_ = nullptr;
  if (std::fclose(f) != 0) throw IoError("close failed on " + path_);
}

}  // namespace sdc::csv
