#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace mpat {

inline constexpr const char* kToolName = "mallowspat";
inline constexpr const char* kToolVersion = "0.1.0";

// All floating-point output goes through one formatter: 15 significant
// digits, locale-independent, so identical flags give identical bytes.
std::string fmt(double v);
std::string fmt(long long v);

/* Ordered key=value manifest emitted with every output; an output file is
 * reproducible from its manifest alone. */
class Manifest {
 public:
  Manifest(const std::string& subcommand);
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value) { set(key, fmt(value)); }
  void set(const std::string& key, long long value) { set(key, fmt(value)); }
  void set(const std::string& key, int value) { set(key, fmt(static_cast<long long>(value))); }

  void write_csv_header(std::ostream& os) const;    // "# key=value" lines
  nlohmann::ordered_json to_json() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// CSV with '#' manifest block, header row, LF endings, empty cell = absent.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const Manifest& manifest,
            const std::vector<std::string>& columns);
  ~CsvWriter() { flush_header(); }
  void comment(const std::string& line);  // extra '#' line before rows start
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
  size_t ncols_;
  bool header_written_ = false;
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  void flush_header();
};

std::string cell(double v);
std::string cell(const std::optional<double>& v);
std::string cell(bool v);

}  // namespace mpat
