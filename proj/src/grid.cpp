#include "tfswap/grid.hpp"

#include <cmath>
#include <string>

#include "tfswap/errors.hpp"

namespace tfswap {

FrequencyGrid FrequencyGrid::centered(double center, double spacing, std::size_t half_cells) {
  return {center - spacing * static_cast<double>(half_cells), spacing, 2 * half_cells + 1};
}

FrequencyGrid FrequencyGrid::symmetric(double center, double spacing, std::size_t count) {
  return {center - 0.5 * spacing * static_cast<double>(count - 1), spacing, count};
}

void validate(const FrequencyGrid& g, const char* name) {
  if (!(g.spacing > 0.0) || !std::isfinite(g.spacing))
    throw ConfigError(std::string(name) + ": grid spacing must be positive");
  if (g.count < 2) throw ConfigError(std::string(name) + ": grid needs at least 2 points");
  if (!std::isfinite(g.start)) throw ConfigError(std::string(name) + ": grid start is not finite");
}

std::vector<double> trapezoid_weights(std::size_t count) {
  std::vector<double> w(count, 1.0);
  if (count >= 2) w.front() = w.back() = 0.5;
  return w;
}

}  // namespace tfswap
