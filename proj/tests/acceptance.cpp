// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
// Usage: acceptance [criterion ...]   (default: all of 1..10)

#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <thread>

#include "fmdp/suites.hpp"

namespace {

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds; 0 for none
  fmdp::CheckResult (*run)(std::size_t jobs);
};

std::size_t default_jobs() {
  const auto n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

const Criterion kCriteria[] = {
    {1, "inverse telescoping identity, 1000 instances, tol 1e-10", 5.0,
     [](std::size_t) { return fmdp::check_inverse_telescoping(1000, 20211, 1e-10); }},
    {2, "component variance bound, 1000 instances, slack 1e-12", 5.0,
     [](std::size_t) { return fmdp::check_component_variance_bound(1000, 20212, 1e-12); }},
    {3, "JAO exact V* vs closed form on the (delta, eps, H) grid, tol 1e-10", 1.0,
     [](std::size_t) { return fmdp::check_jao_optimal_value(1e-10); }},
    {4, "JAO uniform last-state occupancy, 1e5 episodes, 3 sigma", 10.0,
     [](std::size_t) { return fmdp::check_jao_occupancy(100000, 20214, 3.0); }},
    {5, "m = 1 Hoeffding bonus equals H sqrt(L / 2N) bit for bit", 0.0,
     [](std::size_t) { return fmdp::check_single_component_reduction(); }},
    {6, "empirical optimism, benchmark, K = 2000, >= 90 of 100 seeds", 300.0,
     [](std::size_t jobs) { return fmdp::check_empirical_optimism(100, 2000, 90, jobs); }},
    {7, "sublinear regret, benchmark, K = 20000, last/first decile <= 1/3 in >= 9 of 10", 600.0,
     [](std::size_t jobs) { return fmdp::check_sublinear_regret(10, 20000, 9, 1.0 / 3.0, jobs); }},
    {8, "factored F-UCBVI reaches the regret threshold before m = 1 in >= 8 of 10", 0.0,
     [](std::size_t jobs) { return fmdp::check_factorization_advantage(10, 20000, 8, jobs); }},
    {9, "MAB-like optimal gap eps(H-1) and uniform regret, tol 1e-10", 0.0,
     [](std::size_t) { return fmdp::check_mab_like_gaps(1e-10); }},
    {10, "repeated runs give byte-identical CSV output", 0.0,
     [](std::size_t) { return fmdp::check_determinism(); }},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  const auto jobs = default_jobs();
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    auto result = c.run(jobs);
    bool passed = result.passed;
    std::string timing = std::to_string(result.seconds) + "s";
    if (c.time_limit > 0.0) {
      timing += " (limit " + std::to_string(static_cast<int>(c.time_limit)) + "s)";
      if (result.seconds > c.time_limit) passed = false;
    }
    std::printf("%s criterion %d: %s | %s | %s\n", passed ? "PASS" : "FAIL", c.id, c.title,
                result.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    if (!passed) ++failures;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
