// Runs the acceptance criteria and prints one line per criterion.
// Usage: acceptance [id ...]   (all criteria when no ids are given)
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "freebias/verify.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int i = 1; i <= 17; ++i) ids.push_back(i);

  int failed = 0;
  for (int id : ids) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = freebias::verify::run_criterion(id);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%.1fs]\n", freebias::verify::format_line(r).c_str(), secs);
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
  return failed == 0 ? 0 : 1;
}
