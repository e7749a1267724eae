#include "clipopt/csv.hpp"

#include <charconv>
#include <cmath>

#include "clipopt/errors.hpp"

namespace clipopt {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::ios_base::failure("cannot open for writing: " + path);
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << '\n'; }

void CsvWriter::header(const std::string& columns) { out_ << columns << '\n'; }

void CsvWriter::row(const std::string& line) { out_ << line << '\n'; }

}  // namespace clipopt
