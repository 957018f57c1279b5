#pragma once

// Internal convention: angular frequency in rad/fs, length in um, time in fs.
// Physical amplitudes (pump, JSA, psi) are evaluated in SI.

#include <numbers>

namespace tfswap {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double c_um_per_fs = 0.299792458;

namespace si {
inline constexpr double c = 2.99792458e8;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double eps0 = 8.8541878128e-12;
}  // namespace si

inline constexpr double per_fs_to_per_s = 1e15;
inline constexpr double um_to_m = 1e-6;
inline constexpr double pm_to_m = 1e-12;

inline constexpr double rad_per_ps_to_rad_per_fs(double w) { return w * 1e-3; }
inline constexpr double rad_per_fs_to_rad_per_ps(double w) { return w * 1e3; }
inline constexpr double mm_to_um(double x) { return x * 1e3; }

inline double wavelength_um(double omega_rad_per_fs) { return two_pi * c_um_per_fs / omega_rad_per_fs; }
inline double omega_rad_per_fs(double wavelength_um) { return two_pi * c_um_per_fs / wavelength_um; }

inline constexpr const char* unit_convention =
    "omega rad/fs; length um; time fs; c = 0.299792458 um/fs; amplitudes SI";

}  // namespace tfswap
