#pragma once

#include <cstddef>
#include <vector>

namespace tfswap {

// How the data-parallel kernels run. `serial` is the reference path.
enum class Exec { serial, parallel };

struct FrequencyGrid {
  double start = 0.0;    // rad/fs
  double spacing = 0.0;  // rad/fs
  std::size_t count = 0;

  double operator[](std::size_t j) const { return start + spacing * static_cast<double>(j); }
  double stop() const { return (*this)[count - 1]; }
  double center() const { return start + 0.5 * spacing * static_cast<double>(count - 1); }
  bool contains(double w) const { return w >= start && w <= stop(); }

  // Odd count 2h+1 with the center on a node.
  static FrequencyGrid centered(double center, double spacing, std::size_t half_cells);
  // Any count, symmetric about center (nodes straddle it when count is even).
  static FrequencyGrid symmetric(double center, double spacing, std::size_t count);
};

void validate(const FrequencyGrid& g, const char* name);

// Trapezoid weights (in units of the spacing) for `count` nodes.
std::vector<double> trapezoid_weights(std::size_t count);

}  // namespace tfswap
