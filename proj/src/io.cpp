#include "dwave/io.hpp"

#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dwave {

namespace {
std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}
}  // namespace

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(
            fmt::format("config line {}: malformed section header", lineno));
      section = trim(line.substr(1, line.size() - 2));
      cfg[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(
          fmt::format("config line {}: expected key = value", lineno));
    cfg[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string format_double(double v) { return fmt::format("{}", v); }

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : ncols_(columns.size()) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  file_ = f;
  std::string hdr;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) hdr += ',';
    hdr += columns[i];
  }
  hdr += '\n';
  std::fputs(hdr.c_str(), f);
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncols_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_double(values[i]);
  }
  line += '\n';
  std::fputs(line.c_str(), static_cast<FILE*>(file_));
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  if (values.size() != ncols_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += values[i];
  }
  line += '\n';
  std::fputs(line.c_str(), static_cast<FILE*>(file_));
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(static_cast<FILE*>(file_));
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

}  // namespace dwave
