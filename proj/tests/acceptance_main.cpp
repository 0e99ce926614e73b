#include <chrono>
#include <cstdio>
#include <iostream>

#include "fsep/experiments.hpp"

int main() {
  fsep::CheckOptions opt;
  bool all = true;
  int index = 0;
  for (const auto& check : fsep::acceptance_checks()) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    fsep::CheckResult r;
    try {
      r = check.run(opt);
    } catch (const std::exception& e) {
      r.name = check.name;
      r.pass = false;
      r.details = {{"exception", e.what()}};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && r.pass;
    std::printf("[%s] C%d %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", index, r.name.c_str(), secs);
    std::cout << "      " << r.details.dump() << std::endl;
  }
  std::printf("%s\n", all ? "all acceptance criteria passed" : "some acceptance criteria failed");
  return all ? 0 : 1;
}
