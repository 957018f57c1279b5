#include "tfswap/io.hpp"

#include <filesystem>
#include <fstream>

#include "tfswap/errors.hpp"
#include "tfswap/units.hpp"

namespace tfswap {

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", x);
  return buf;
}

nlohmann::json grid_json(const FrequencyGrid& g) {
  return {{"start_rad_per_fs", g.start}, {"stop_rad_per_fs", g.stop()}, {"spacing_rad_per_fs", g.spacing},
          {"count", g.count}};
}

nlohmann::json meta_json(const OutputMeta& m) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["kind"] = m.kind;
  j["config_hash"] = m.config_hash;
  j["units"] = unit_convention;
  nlohmann::json g = nlohmann::json::object();
  for (const auto& [name, grid] : m.grids) g[name] = grid_json(grid);
  j["grids"] = g;
  for (const auto& [k, v] : m.extra) j[k] = v;
  return j;
}

CsvWriter::CsvWriter(const std::string& path, const OutputMeta& meta, const std::vector<std::string>& columns)
    : path_(path), ncol_(columns.size()) {
  f_ = std::fopen(path.c_str(), "w");
  if (!f_) throw ConfigError("cannot write " + path);
  std::fprintf(f_, "# schema_version: %s\n# kind: %s\n# config_hash: %s\n# units: %s\n", schema_version,
               meta.kind.c_str(), meta.config_hash.c_str(), unit_convention);
  for (const auto& [name, g] : meta.grids)
    std::fprintf(f_, "# grid %s: start %s stop %s spacing %s count %zu (rad/fs)\n", name.c_str(), sci(g.start).c_str(),
                 sci(g.stop()).c_str(), sci(g.spacing).c_str(), g.count);
  for (const auto& [k, v] : meta.extra) std::fprintf(f_, "# %s: %s\n", k.c_str(), v.c_str());
  for (std::size_t i = 0; i < columns.size(); ++i) std::fprintf(f_, "%s%s", i ? "," : "", columns[i].c_str());
  std::fputc('\n', f_);
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<double>& v) {
  if (v.size() != ncol_) throw DomainError("CsvWriter: row width mismatch in " + path_);
  for (std::size_t i = 0; i < v.size(); ++i) std::fprintf(f_, "%s%.15e", i ? "," : "", v[i]);
  std::fputc('\n', f_);
}

void CsvWriter::close() {
  if (f_ && std::fclose(f_) != 0) {
    f_ = nullptr;
    throw ConfigError("error closing " + path_);
  }
  f_ = nullptr;
}

void write_json(const std::string& path, const OutputMeta& meta, const nlohmann::json& body) {
  nlohmann::json j = body;
  j["meta"] = meta_json(meta);
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << j.dump(2) << '\n';
  if (!f) throw ConfigError("error writing " + path);
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory " + dir + ": " + ec.message());
}

}  // namespace tfswap
