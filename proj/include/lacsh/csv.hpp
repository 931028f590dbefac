#pragma once

#include <string>
#include <vector>

namespace lacsh {

// Minimal CSV support: comma-separated, no embedded commas/quotes needed by
// any of the engine's formats. Numbers are written with %.17g so read-back
// is exact.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

std::string format_double(double v);
double parse_double(const std::string& s, const std::string& context);
long parse_long(const std::string& s, const std::string& context);

}  // namespace lacsh
