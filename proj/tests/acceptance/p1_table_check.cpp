// Re-estimates every cell of the built-in P1 table at 10^6 replications.
// Usage: avw_p1_table_check [reps] [workers]

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "avw/nullmodel.hpp"

int main(int argc, char** argv) {
  using namespace avw;
  const std::int64_t reps = argc > 1 ? std::atoll(argv[1]) : 1'000'000;
  const int workers = argc > 2 ? std::atoi(argv[2]) : 1;
  constexpr double kTolerance = 0.004;
  int failures = 0;
  int cells = 0;
  for (const auto& [key, table_value] : nullmodel::OracleTable::builtin().cells()) {
    const auto& [distribution, metric_name, dim] = key;
    const auto metric = geometry::MetricSpec::parse(metric_name);
    const auto law = nullmodel::distribution_from_name(distribution, dim);
    const auto e = nullmodel::estimate_p1(law, metric, reps, 20240917, workers);
    const double diff = e.value - table_value;
    const bool pass = std::fabs(diff) <= kTolerance;
    failures += !pass;
    ++cells;
    std::printf("%s %s/%s/%d: estimate %.6f (se %.6f), table %.6f, diff %+.5f\n",
                pass ? "PASS" : "FAIL", distribution.c_str(), metric_name.c_str(), dim, e.value,
                e.std_error, table_value, diff);
    std::fflush(stdout);
  }
  std::printf("%d/%d cells within %.3f\n", cells - failures, cells, kTolerance);
  return failures == 0 ? 0 : 1;
}
