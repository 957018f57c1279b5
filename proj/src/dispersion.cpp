#include "tfswap/dispersion.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "tfswap/config.hpp"
#include "tfswap/errors.hpp"
#include "tfswap/units.hpp"

namespace tfswap {

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

SellmeierModel SellmeierModel::constant(Axis axis, double n, double lambda_min_um, double lambda_max_um) {
  SellmeierModel m;
  m.axis = axis;
  m.A = n * n;
  m.lambda_min_um = lambda_min_um;
  m.lambda_max_um = lambda_max_um;
  return m;
}

const SellmeierModel& SellmeierSet::operator[](Axis a) const {
  switch (a) {
    case Axis::x: return x;
    case Axis::y: return y;
    case Axis::z: return z;
  }
  return y;
}

namespace {

double need(const std::map<std::string, std::string>& kv, const std::string& key, const std::string& path) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError(path + ": missing key '" + key + "'");
  return parse_double(it->second, key);
}

SellmeierModel read_axis(const std::map<std::string, std::string>& kv, Axis axis, const std::string& path) {
  const std::string p = std::string(axis_name(axis)) + ".";
  SellmeierModel m;
  m.axis = axis;
  m.A = need(kv, p + "A", path);
  for (int j = 1;; ++j) {
    const std::string b = p + "B" + std::to_string(j), c = p + "C" + std::to_string(j);
    if (!kv.count(b)) break;
    m.B.push_back(need(kv, b, path));
    m.C.push_back(need(kv, c, path));
  }
  m.lambda_min_um = need(kv, p + "lambda_min_um", path);
  m.lambda_max_um = need(kv, p + "lambda_max_um", path);
  if (!(m.lambda_min_um > 0.0 && m.lambda_max_um > m.lambda_min_um))
    throw ConfigError(path + ": bad valid range for axis " + axis_name(axis));
  return m;
}

}  // namespace

SellmeierSet load_sellmeier(const std::string& path) {
  const auto kv = read_key_value_file(path);
  return {read_axis(kv, Axis::x, path), read_axis(kv, Axis::y, path), read_axis(kv, Axis::z, path)};
}

std::string default_sellmeier_path() { return std::string(TFSWAP_DATA_DIR) + "/ktp_sellmeier.txt"; }

const SellmeierSet& default_ktp() {
  static const SellmeierSet set = load_sellmeier(default_sellmeier_path());
  return set;
}

double refractive_index(const SellmeierModel& m, double omega) {
  const double lam = wavelength_um(omega);
  if (!(omega > 0.0) || !(lam >= m.lambda_min_um && lam <= m.lambda_max_um)) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "wavelength %.6g um (omega %.6g rad/fs) outside the %s-axis range [%g, %g] um", lam,
                  omega, axis_name(m.axis), m.lambda_min_um, m.lambda_max_um);
    throw DomainError(buf);
  }
  const double l2 = lam * lam;
  double n2 = m.A;
  for (std::size_t j = 0; j < m.B.size(); ++j) n2 += m.B[j] / (l2 - m.C[j]);
  return std::sqrt(n2);
}

double wavevector(const SellmeierModel& m, double omega) { return refractive_index(m, omega) * omega / c_um_per_fs; }

double group_slowness(const SellmeierModel& m, double omega, double h) {
  if (!(h > 0.0) || h < 1e-10 * omega) throw DomainError("group_slowness: finite-difference step too small");
  if (h >= omega) throw DomainError("group_slowness: finite-difference step exceeds the frequency");
  return (wavevector(m, omega + h) - wavevector(m, omega - h)) / (2.0 * h);
}

double group_index(const SellmeierModel& m, double omega, double h) {
  return c_um_per_fs * group_slowness(m, omega, h);
}

}  // namespace tfswap
