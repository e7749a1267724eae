#ifndef CLIPOPT_CSV_HPP
#define CLIPOPT_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace clipopt {

// Shortest round-trip decimal form of v ("nan"/"inf"/"-inf" for specials).
// Used for every numeric field we emit so that re-parsing gives the exact
// double back and repeated runs produce byte-identical files.
std::string fmt_double(double v);

// Plain CSV file: optional '#'-prefixed comment lines, one header, rows.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void comment(const std::string& line);  // written as "# " + line
  void header(const std::string& columns);
  void row(const std::string& line);
  bool good() const { return out_.good(); }

 private:
  std::ofstream out_;
};

}  // namespace clipopt

#endif  // CLIPOPT_CSV_HPP
