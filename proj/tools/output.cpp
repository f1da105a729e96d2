#include "output.hpp"

#include <cmath>
#include <cstdio>

namespace mpat {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string fmt(long long v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld", v);
  return buf;
}

Manifest::Manifest(const std::string& subcommand) {
  entries_.emplace_back("tool", kToolName);
  entries_.emplace_back("version", kToolVersion);
  entries_.emplace_back("subcommand", subcommand);
}

void Manifest::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void Manifest::write_csv_header(std::ostream& os) const {
  for (const auto& [k, v] : entries_) os << "# " << k << "=" << v << "\n";
}

nlohmann::ordered_json Manifest::to_json() const {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : entries_) j[k] = v;
  return j;
}

CsvWriter::CsvWriter(std::ostream& os, const Manifest& manifest,
                     const std::vector<std::string>& columns)
    : os_(os), ncols_(columns.size()), columns_(columns) {
  manifest.write_csv_header(os_);
}

void CsvWriter::comment(const std::string& line) {
  if (header_written_) {
    os_ << "# " << line << "\n";
  } else {
    comments_.push_back(line);
  }
}

void CsvWriter::flush_header() {
  if (header_written_) return;
  for (const auto& c : comments_) os_ << "# " << c << "\n";
  for (size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
  os_ << "\n";
  header_written_ = true;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  flush_header();
  for (size_t i = 0; i < ncols_; ++i) os_ << (i ? "," : "") << (i < cells.size() ? cells[i] : "");
  os_ << "\n";
}

std::string cell(double v) { return fmt(v); }

std::string cell(const std::optional<double>& v) { return v ? fmt(*v) : std::string{}; }

std::string cell(bool v) { return v ? "1" : "0"; }

}  // namespace mpat
