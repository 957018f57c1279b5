#pragma once

#include "tfswap/experiments.hpp"

// A reduced design: same physics, smaller bystander box and quadrature so
// the swap pipeline runs in seconds.
inline tfswap::SimConfig small_config() {
  tfswap::SimConfig c;
  c.grid_half_cells = 30;
  c.integrationPoints = 100;
  return c;
}

struct SmallRun {
  tfswap::SimConfig config;
  tfswap::Design design;
  tfswap::SourceRun source;
};

inline const SmallRun& small_run() {
  static const SmallRun r = [] {
    SmallRun s;
    s.config = small_config();
    s.design = tfswap::make_design(s.config);
    s.source = tfswap::build_source(s.config, s.design);
    return s;
  }();
  return r;
}
