// Acceptance suite: one pass/fail line per criterion.  The same checks
// back the CLI selftest command.
#include <cstdio>
#include <cstring>

#include "dpfib/selftest.hpp"

int main(int argc, char** argv) {
  bool heavy = true;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) heavy = false;
  auto results = dpfib::run_acceptance(heavy);
  int failures = dpfib::print_acceptance(results);
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
