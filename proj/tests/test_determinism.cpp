#include <string>

#include "doctest.h"
#include "ktsieve/liouville_lab.hpp"
#include "ktsieve/numeric.hpp"
#include "ktsieve/primes.hpp"
#include "ktsieve/rayleigh.hpp"
#include "ktsieve/tuples.hpp"
#include "ktsieve/twin_stats.hpp"

using namespace ktsieve;

namespace {

std::string run(unsigned threads) {
  TableOptions opt;
  opt.threads = threads;
  opt.segment_bits = 1 << 16;
  const auto pt = build_primes(3000003, opt);
  const auto lt = build_liouville(2000000, opt);
  const auto series = twin::singular_series(1e-9);
  std::string out;
  const std::uint64_t xs[] = {10, 1000, 100000, 3000000};
  out += twin::rows_to_csv(twin::twin_table(pt, xs, series, threads));
  out += format_real(twin::brun_partial(pt, 3000000, threads)) + "\n";
  const auto c = twin::cramer_estimates(1e5, 64, 5, series, threads);
  out += format_real(c.monte_carlo_mean) + "," + format_real(c.monte_carlo_std) + "\n";
  std::vector<liouville::IntervalStats> stats;
  for (std::uint64_t h : {10, 100, 1000}) {
    stats.push_back(liouville::interval_stats(lt, 1000000, h, 1.0, threads));
    stats.push_back(liouville::exp_sum_stats(lt, 1000000, h, 0.37, 1.0, threads));
  }
  out += liouville::stats_to_csv(stats);
  const auto sf = liouville::small_factor_density(pt, 1000000, 10000, threads);
  out += format_real(sf.mean_count) + "\n";
  out += tuples::tuple_to_json(tuples::narrowest_tuple(9, 64, threads)) + "\n";
  sieve::AssemblyOptions a;
  a.threads = threads;
  out += format_real(sieve::mk_lower_bound(20, 6, sieve::family_p2p3(), a).ratio) + "\n";
  return out;
}

}  // namespace

TEST_CASE("outputs are byte-identical across thread counts") {
  const auto one = run(1);
  CHECK(one == run(2));
  CHECK(one == run(4));
  CHECK(one == run(8));
}
