#include <cstdlib>
#include <iostream>

#include "zlab/acceptance.hpp"

int main() {
  zlab::AcceptanceOptions opt;
  if (const char* s = std::getenv("ZLAB_SEED")) opt.sweep.seed = std::strtoull(s, nullptr, 10);
  const auto results = zlab::run_acceptance(opt);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << zlab::format_line(r) << '\n';
    if (!r.pass) ++failed;
  }
  std::cout << (results.size() - failed) << '/' << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
