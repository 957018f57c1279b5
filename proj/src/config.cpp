#include "tfswap/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "tfswap/errors.hpp"

namespace tfswap {

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

struct Field {
  std::function<void(SimConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const SimConfig&)> get;
};

template <class T>
Field num(T SimConfig::*m) {
  if constexpr (std::is_same_v<T, double>)
    return {[m](SimConfig& c, const std::string& k, const std::string& v) { c.*m = parse_double(v, k); },
            [m](const SimConfig& c) { return fmt(c.*m); }};
  else
    return {[m](SimConfig& c, const std::string& k, const std::string& v) { c.*m = parse_long(v, k); },
            [m](const SimConfig& c) { return std::to_string(c.*m); }};
}

Field list(std::vector<double> SimConfig::*m) {
  return {[m](SimConfig& c, const std::string& k, const std::string& v) { c.*m = parse_double_list(v, k); },
          [m](const SimConfig& c) { return fmt_list(c.*m); }};
}

Field str(std::string SimConfig::*m) {
  return {[m](SimConfig& c, const std::string&, const std::string& v) { c.*m = v; },
          [m](const SimConfig& c) { return c.*m; }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> f = {
      {"L_mm", num(&SimConfig::L_mm)},
      {"L_SFG_mm", num(&SimConfig::L_SFG_mm)},
      {"L_SFG_sweep_mm", list(&SimConfig::L_SFG_sweep_mm)},
      {"poling_period_um", num(&SimConfig::poling_period_um)},
      {"poling_period_SFG_um", num(&SimConfig::poling_period_SFG_um)},
      {"omega_p_rad_per_fs", num(&SimConfig::omega_p_rad_per_fs)},
      {"omega_s_rad_per_fs", num(&SimConfig::omega_s_rad_per_fs)},
      {"omega_i_rad_per_fs", num(&SimConfig::omega_i_rad_per_fs)},
      {"sigma_p_rad_per_ps", num(&SimConfig::sigma_p_rad_per_ps)},
      {"delta_omega_SFG_rad_per_ps", num(&SimConfig::delta_omega_SFG_rad_per_ps)},
      {"delta_omega_si_rad_per_ps", num(&SimConfig::delta_omega_si_rad_per_ps)},
      {"P_avg_W", num(&SimConfig::P_avg_W)},
      {"R_R_GHz", num(&SimConfig::R_R_GHz)},
      {"d24_pm_per_V", num(&SimConfig::d24_pm_per_V)},
      {"A_I_um2", num(&SimConfig::A_I_um2)},
      {"Q", num(&SimConfig::Q)},
      {"N_bins", num(&SimConfig::N_bins)},
      {"integrationPoints", num(&SimConfig::integrationPoints)},
      {"grid_capture", num(&SimConfig::grid_capture)},
      {"grid_half_cells", num(&SimConfig::grid_half_cells)},
      {"grid_reference_half_cells", num(&SimConfig::grid_reference_half_cells)},
      {"gamma", num(&SimConfig::gamma)},
      {"eta", num(&SimConfig::eta)},
      {"kappa", num(&SimConfig::kappa)},
      {"support_tolerance", num(&SimConfig::support_tolerance)},
      {"memory_budget_GB", num(&SimConfig::memory_budget_GB)},
      {"threads", num(&SimConfig::threads)},
      {"output_dir", str(&SimConfig::output_dir)},
      {"sellmeier_file", str(&SimConfig::sellmeier_file)},
      {"toy_N", list(&SimConfig::toy_N)},
      {"toy_eta", list(&SimConfig::toy_eta)},
  };
  return f;
}
}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    kv[k] = v;
  }
  return kv;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_key_values(ss.str(), path);
}

double parse_double(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(key + ": '" + s + "' is not a number");
  return v;
}

long parse_long(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  long v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw ConfigError(key + ": '" + s + "' is not an integer");
  return v;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(parse_double(item, key));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

void SimConfig::set(const std::string& key, const std::string& value) {
  const auto& f = fields();
  auto it = f.find(key);
  if (it == f.end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second.set(*this, key, value);
}

void SimConfig::apply(const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) set(k, v);
}

std::vector<std::string> SimConfig::keys() {
  std::vector<std::string> k;
  for (const auto& [name, f] : fields()) k.push_back(name);
  return k;
}

std::map<std::string, std::string> SimConfig::values() const {
  std::map<std::string, std::string> out;
  for (const auto& [name, f] : fields()) out[name] = f.get(*this);
  return out;
}

std::string SimConfig::canonical() const {
  // runtime-only settings do not change any number and stay out of the hash
  static const std::set<std::string> runtime = {"threads", "output_dir", "memory_budget_GB"};
  std::string s;
  for (const auto& [k, v] : values())
    if (!runtime.count(k)) s += k + " = " + v + "\n";
  return s;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string SimConfig::hash() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

void SimConfig::validate() const {
  auto pos = [](double v, const char* k) {
    if (!(v > 0.0)) throw ConfigError(std::string(k) + " must be positive");
  };
  pos(L_mm, "L_mm");
  pos(L_SFG_mm, "L_SFG_mm");
  for (double x : L_SFG_sweep_mm) pos(x, "L_SFG_sweep_mm");
  pos(poling_period_um, "poling_period_um");
  pos(poling_period_SFG_um, "poling_period_SFG_um");
  pos(omega_p_rad_per_fs, "omega_p_rad_per_fs");
  pos(omega_s_rad_per_fs, "omega_s_rad_per_fs");
  pos(omega_i_rad_per_fs, "omega_i_rad_per_fs");
  pos(sigma_p_rad_per_ps, "sigma_p_rad_per_ps");
  pos(delta_omega_SFG_rad_per_ps, "delta_omega_SFG_rad_per_ps");
  pos(delta_omega_si_rad_per_ps, "delta_omega_si_rad_per_ps");
  if (!(P_avg_W >= 0.0)) throw ConfigError("P_avg_W must be >= 0");
  pos(R_R_GHz, "R_R_GHz");
  pos(d24_pm_per_V, "d24_pm_per_V");
  pos(A_I_um2, "A_I_um2");
  if (Q < 1) throw ConfigError("Q must be >= 1");
  if (N_bins < 1) throw ConfigError("N_bins must be >= 1");
  if (integrationPoints < 50) throw ConfigError("integrationPoints must be >= 50");
  if (!(grid_capture > 0.0 && grid_capture <= 1.0)) throw ConfigError("grid_capture must lie in (0, 1]");
  if (grid_half_cells < 0) throw ConfigError("grid_half_cells must be >= 0");
  if (grid_reference_half_cells < 2) throw ConfigError("grid_reference_half_cells must be >= 2");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
  pos(kappa, "kappa");
  if (!(support_tolerance >= 0.0 && support_tolerance < 1.0)) throw ConfigError("support_tolerance must lie in [0, 1)");
  pos(memory_budget_GB, "memory_budget_GB");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  for (double n : toy_N)
    if (n < 2 || n != std::floor(n)) throw ConfigError("toy_N entries must be integers >= 2");
  for (double e : toy_eta)
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("toy_eta entries must lie in [0, 1]");
}

SimConfig load_config(const std::string& path) {
  SimConfig c;
  c.apply(read_key_value_file(path));
  return c;
}

}  // namespace tfswap
