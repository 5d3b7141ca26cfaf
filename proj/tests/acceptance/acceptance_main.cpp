// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <iostream>

#include "cli/acceptance.hpp"

using namespace edgelap::cli;

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto first = run_acceptance();
  bool ok = true;
  for (const auto& r : first) {
    std::cout << format_line(r) << "\n";
    ok = ok && r.pass();
  }

  // 12: a second full run must serialize identically
  const auto second = run_acceptance();
  const std::string ja = dump_fixed(acceptance_json(first)), jb = dump_fixed(acceptance_json(second));
  const std::string ca = acceptance_csv(first), cb = acceptance_csv(second);
  const bool same = ja == jb && ca == cb;
  std::printf("[%s] 12 %-26s json_bytes=%zu csv_bytes=%zu identical=%s\n", same ? "PASS" : "FAIL", "Determinism",
              ja.size(), ca.size(), same ? "yes" : "no");
  ok = ok && same;

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("total %.1f s, %s\n", total, ok ? "all criteria pass" : "some criteria fail");
  std::cout.flush();
  return ok ? 0 : 1;
}
