#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tfswap/grid.hpp"

namespace tfswap {

inline constexpr const char* schema_version = "tfswap-output/1";

// Carried by every output file.
struct OutputMeta {
  std::string kind;
  std::string config_hash;
  std::vector<std::pair<std::string, FrequencyGrid>> grids;
  std::vector<std::pair<std::string, std::string>> extra;
};

std::string sci(double x);  // %.15e
nlohmann::json grid_json(const FrequencyGrid& g);
nlohmann::json meta_json(const OutputMeta& m);

// Comma-separated, '#'-prefixed metadata lines, then a column header.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const OutputMeta& meta, const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void close();

 private:
  std::FILE* f_ = nullptr;
  std::string path_;
  std::size_t ncol_ = 0;
};

// Writes {"meta": ..., <body keys>} with 2-space indentation.
void write_json(const std::string& path, const OutputMeta& meta, const nlohmann::json& body);

void ensure_directory(const std::string& dir);

}  // namespace tfswap
