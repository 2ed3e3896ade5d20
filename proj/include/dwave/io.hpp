#pragma once

#include <map>
#include <string>
#include <vector>

namespace dwave {

using ConfigSection = std::map<std::string, std::string>;
using Config = std::map<std::string, ConfigSection>;

/// Flat sectioned key = value text; '#' comments; keys outside a section go
/// into "".
Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

/// CSV with a header row; floats as shortest round-trip decimals.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  ~CsvWriter();

 private:
  void* file_;
  std::size_t ncols_;
};

std::string format_double(double v);

std::vector<int> parse_int_list(const std::string& csv);
std::vector<double> parse_double_list(const std::string& csv);

void ensure_directory(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dwave
