#include <iostream>

#include "tfswap/acceptance.hpp"

// One line per criterion; nonzero exit if any fails.
int main(int argc, char** argv) {
  tfswap::SimConfig c;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const auto r = tfswap::run_acceptance(c, only, std::cout);
  int failed = 0;
  for (const auto& x : r) failed += !x.passed;
  std::cout << r.size() - failed << "/" << r.size() << " criteria passed" << std::endl;
  return tfswap::all_passed(r) ? 0 : 1;
}
