#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdc::csv {

// Minimal comma-separated reader for the plain numeric tables this project
// exchanges: no quoting, '#' comment lines permitted before the header,
// whitespace around cells ignored.
struct Document {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Document read_file(const std::string& path);
Document read_stream(std::istream& in, const std::string& origin);

std::vector<std::string> split_line(const std::string& line);
std::string trim(const std::string& s);

// Strict double parse; throws ParseError naming `context` on failure.
double parse_double(const std::string& cell, const std::string& context);
long long parse_int(const std::string& cell, const std::string& context);

class Writer {
 public:
  explicit Writer(const std::string& path);
  ~Writer();
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void write_row(const std::vector<std::string>& cells);
  void write_line(const std::string& line);
  void close();

 private:
  std::string path_;
  void* file_ = nullptr;  // FILE*
};

}  // namespace sdc::csv
