// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0

#include "ktsieve/ktsieve.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "ktsieve/error.hpp"
#include "ktsieve/gfunction.hpp"
#include "ktsieve/liouville_lab.hpp"
#include "ktsieve/numeric.hpp"
#include "ktsieve/primes.hpp"
#include "ktsieve/rayleigh.hpp"
#include "ktsieve/reproduce.hpp"
#include "ktsieve/tuples.hpp"
#include "ktsieve/twin_stats.hpp"
#include "ktsieve/weights.hpp"

struct kts_config {
  ktsieve::TableOptions table;
};
struct kts_prime_table {
  ktsieve::PrimeTable table;
};
struct kts_liouville_table {
  ktsieve::LiouvilleTable table;
};

namespace {

thread_local std::string last_error;

kts_status to_status(ktsieve::ErrorCode code) {
  using ktsieve::ErrorCode;
  switch (code) {
    case ErrorCode::validation: return KTS_ERR_VALIDATION;
    case ErrorCode::range: return KTS_ERR_RANGE;
    case ErrorCode::resource: return KTS_ERR_RESOURCE;
    case ErrorCode::numeric: return KTS_ERR_NUMERIC;
    case ErrorCode::not_found: return KTS_ERR_NOT_FOUND;
    case ErrorCode::basis: return KTS_ERR_BASIS;
    case ErrorCode::io: return KTS_ERR_IO;
  }
  return KTS_ERR_INTERNAL;
}

template <typename Body>
kts_status guard(Body&& body) {
  try {
    body();
    last_error.clear();
    return KTS_OK;
  } catch (const ktsieve::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return KTS_ERR_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return KTS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) ktsieve::fail(ktsieve::ErrorCode::validation, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ktsieve::TableOptions options_of(const kts_config* cfg) {
  return cfg ? cfg->table : ktsieve::TableOptions{};
}

unsigned threads_of(const kts_config* cfg) { return cfg ? cfg->table.threads : 1u; }

void copy_tuple(const ktsieve::tuples::Tuple& t, int64_t* offsets, size_t capacity,
                size_t* length) {
  require(length, "length");
  *length = t.size();
  if (offsets == nullptr) return;
  for (size_t i = 0; i < t.size() && i < capacity; ++i) offsets[i] = t[i];
}

kts_interval_stats to_c(const ktsieve::liouville::IntervalStats& s) {
  return {s.X, s.h, s.threshold_const, s.exceed_fraction, s.mean_abs_normalized};
}

std::string fixed10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

std::string rayleigh_json(const ktsieve::sieve::RayleighResult& r) {
  using ktsieve::format_real;
  std::ostringstream os;
  os << "{\"ratio\":" << fixed10(r.ratio) << ",\"degree\":" << r.degree
     << ",\"basis_size\":" << r.basis_size << ",\"residual\":" << format_real(r.residual)
     << ",\"family\":\"" << r.family << "\",\"certified_above_4\":"
     << (r.certified_ratio > 4 ? "true" : "false") << ",\"coefficients\":[";
  for (size_t i = 0; i < r.coefficients.size(); ++i) {
    os << (i ? "," : "") << format_real(r.coefficients[i]);
  }
  os << "]}";
  return os.str();
}

}  // namespace

extern "C" {

const char* kts_version(void) { return "1.0.0"; }

const char* kts_last_error(void) { return last_error.c_str(); }

const char* kts_status_name(kts_status status) {
  switch (status) {
    case KTS_OK: return "ok";
    case KTS_ERR_VALIDATION: return "validation error";
    case KTS_ERR_RANGE: return "range error";
    case KTS_ERR_RESOURCE: return "resource error";
    case KTS_ERR_NUMERIC: return "numeric error";
    case KTS_ERR_NOT_FOUND: return "not found";
    case KTS_ERR_BASIS: return "basis error";
    case KTS_ERR_IO: return "i/o error";
    case KTS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void kts_string_free(char* s) { std::free(s); }

kts_status kts_config_new(kts_config** out) {
  return guard([&] {
    require(out, "out");
    *out = new kts_config{};
  });
}

void kts_config_free(kts_config* cfg) { delete cfg; }

kts_status kts_config_set_threads(kts_config* cfg, unsigned threads) {
  return guard([&] {
    require(cfg, "config");
    if (threads < 1) ktsieve::fail(ktsieve::ErrorCode::validation, "threads must be at least 1");
    cfg->table.threads = threads;
  });
}

kts_status kts_config_set_cache_dir(kts_config* cfg, const char* dir) {
  return guard([&] {
    require(cfg, "config");
    cfg->table.cache_dir = dir ? dir : "";
  });
}

kts_status kts_config_set_memory_budget(kts_config* cfg, uint64_t bytes) {
  return guard([&] {
    require(cfg, "config");
    cfg->table.memory_budget = bytes;
  });
}

kts_status kts_config_set_segment_bits(kts_config* cfg, uint64_t bits) {
  return guard([&] {
    require(cfg, "config");
    if (bits == 0) ktsieve::fail(ktsieve::ErrorCode::validation, "segment length must be positive");
    cfg->table.segment_bits = bits;
  });
}

kts_status kts_prime_table_build(const kts_config* cfg, uint64_t limit, kts_prime_table** out) {
  return guard([&] {
    require(out, "out");
    *out = new kts_prime_table{ktsieve::build_primes(limit, options_of(cfg))};
  });
}

void kts_prime_table_free(kts_prime_table* table) { delete table; }

uint64_t kts_prime_table_limit(const kts_prime_table* table) {
  return table ? table->table.limit() : 0;
}

kts_status kts_is_prime(const kts_prime_table* table, uint64_t n, int* out) {
  return guard([&] {
    require(table, "table");
    require(out, "out");
    if (n >= table->table.limit()) ktsieve::fail(ktsieve::ErrorCode::range, "n is outside the table");
    *out = table->table.is_prime(n) ? 1 : 0;
  });
}

kts_status kts_prime_count(const kts_prime_table* table, uint64_t x, uint64_t* out) {
  return guard([&] {
    require(table, "table");
    require(out, "out");
    *out = ktsieve::prime_count(table->table, x);
  });
}

kts_status kts_liouville_build(const kts_config* cfg, uint64_t limit, kts_liouville_table** out) {
  return guard([&] {
    require(out, "out");
    *out = new kts_liouville_table{ktsieve::build_liouville(limit, options_of(cfg))};
  });
}

void kts_liouville_free(kts_liouville_table* table) { delete table; }

kts_status kts_liouville_value(const kts_liouville_table* table, uint64_t n, int* out) {
  return guard([&] {
    require(table, "table");
    require(out, "out");
    *out = table->table.at(n);
  });
}

kts_status kts_count_twins(const kts_config* cfg, const kts_prime_table* table, uint64_t x,
                           uint64_t* out) {
  return guard([&] {
    require(table, "table");
    require(out, "out");
    *out = ktsieve::twin::count_twins(table->table, x, threads_of(cfg));
  });
}

kts_status kts_singular_series_value(double target_abs_err, kts_singular_series* out) {
  return guard([&] {
    require(out, "out");
    const auto s = ktsieve::twin::singular_series(target_abs_err);
    *out = {s.value, s.truncation_prime, s.tail_bound};
  });
}

kts_status kts_singular_series_truncated(uint64_t max_prime, kts_singular_series* out) {
  return guard([&] {
    require(out, "out");
    const auto s = ktsieve::twin::singular_series_truncated(max_prime);
    *out = {s.value, s.truncation_prime, s.tail_bound};
  });
}

kts_status kts_li2(double x, double rel_err, double* out) {
  return guard([&] {
    require(out, "out");
    *out = ktsieve::twin::li2(x, rel_err);
  });
}

kts_status kts_twin_table(const kts_config* cfg, const kts_prime_table* table,
                          const uint64_t* xs, size_t count, kts_format format, char** report) {
  return guard([&] {
    require(table, "table");
    require(report, "report");
    if (count > 0) require(xs, "xs");
    const auto series = ktsieve::twin::singular_series(1e-9);
    const auto rows = ktsieve::twin::twin_table(
        table->table, std::span<const uint64_t>(xs, count), series, threads_of(cfg));
    *report = dup_string(format == KTS_FORMAT_JSON ? ktsieve::twin::rows_to_json(rows)
                                                   : ktsieve::twin::rows_to_csv(rows));
  });
}

kts_status kts_brun_partial(const kts_config* cfg, const kts_prime_table* table, uint64_t x,
                            double* out) {
  return guard([&] {
    require(table, "table");
    require(out, "out");
    *out = ktsieve::twin::brun_partial(table->table, x, threads_of(cfg));
  });
}

kts_status kts_circle_check(const kts_prime_table* table, uint64_t x, uint64_t* out) {
  return guard([&] {
    require(table, "table");
    require(out, "out");
    *out = ktsieve::twin::circle_check(table->table, x);
  });
}

kts_status kts_cramer_estimates(const kts_config* cfg, double x, uint64_t trials, uint64_t seed,
                                kts_cramer* out) {
  return guard([&] {
    require(out, "out");
    const auto series = ktsieve::twin::singular_series(1e-9);
    const auto c = ktsieve::twin::cramer_estimates(x, trials, seed, series, threads_of(cfg));
    *out = {c.naive, c.corrected, c.monte_carlo_mean, c.monte_carlo_std};
  });
}

kts_status kts_check_admissible(const int64_t* offsets, size_t count, kts_admissibility* out) {
  return guard([&] {
    require(out, "out");
    if (count > 0) require(offsets, "offsets");
    const auto c = ktsieve::tuples::check_admissible(std::span<const int64_t>(offsets, count));
    *out = {c.admissible ? 1 : 0, c.blocking_prime.value_or(0), c.prime_bound};
  });
}

kts_status kts_check_admissible_json(const int64_t* offsets, size_t count, char** json) {
  return guard([&] {
    require(json, "json");
    if (count > 0) require(offsets, "offsets");
    const std::span<const int64_t> t(offsets, count);
    const auto c = ktsieve::tuples::check_admissible(t);
    std::ostringstream os;
    os << "{\"tuple\":" << ktsieve::tuples::tuple_to_json(t) << ",\"k\":" << count
       << ",\"diameter\":" << ktsieve::tuples::diameter(t)
       << ",\"admissible\":" << (c.admissible ? "true" : "false") << ",\"blocking_prime\":";
    if (c.blocking_prime) os << *c.blocking_prime;
    else os << "null";
    os << ",\"prime_bound\":" << c.prime_bound << ",\"witness\":{";
    bool first = true;
    for (const auto& [p, r] : c.witness) {
      os << (first ? "" : ",") << '"' << p << "\":" << r;
      first = false;
    }
    os << "}}";
    *json = dup_string(os.str());
  });
}

kts_status kts_narrowest_tuple(const kts_config* cfg, int k, int64_t search_bound,
                               int64_t* offsets, size_t capacity, size_t* length) {
  return guard([&] {
    copy_tuple(ktsieve::tuples::narrowest_tuple(k, search_bound, threads_of(cfg)), offsets,
               capacity, length);
  });
}

kts_status kts_primes_after_k(const kts_prime_table* table, int k, int64_t* offsets,
                              size_t capacity, size_t* length) {
  return guard([&] {
    require(table, "table");
    copy_tuple(ktsieve::tuples::primes_after_k(table->table, k), offsets, capacity, length);
  });
}

kts_status kts_verify_paper_tuple(kts_admissibility* out, size_t* k, int64_t* diameter) {
  return guard([&] {
    require(out, "out");
    const auto c = ktsieve::tuples::verify_paper_tuple();
    *out = {c.admissible ? 1 : 0, c.blocking_prime.value_or(0), c.prime_bound};
    const auto t = ktsieve::tuples::paper_tuple();
    if (k) *k = t.size();
    if (diameter) *diameter = ktsieve::tuples::diameter(t);
  });
}

static ktsieve::sieve::RayleighResult run_mk(const kts_config* cfg, int k, int degree,
                                             const char* family) {
  require(family, "family");
  ktsieve::sieve::AssemblyOptions assembly;
  assembly.threads = threads_of(cfg);
  return ktsieve::sieve::mk_lower_bound(
      k, degree, ktsieve::sieve::family_by_name(family, degree), assembly);
}

kts_status kts_mk_lower_bound(const kts_config* cfg, int k, int degree, const char* family,
                              kts_rayleigh* out) {
  return guard([&] {
    require(out, "out");
    const auto r = run_mk(cfg, k, degree, family);
    *out = {r.ratio, r.residual, r.degree, r.basis_size, r.certified_ratio > 4 ? 1 : 0};
  });
}

kts_status kts_mk_lower_bound_json(const kts_config* cfg, int k, int degree, const char* family,
                                   char** json) {
  return guard([&] {
    require(json, "json");
    *json = dup_string(rayleigh_json(run_mk(cfg, k, degree, family)));
  });
}

kts_status kts_mk_escalate_json(const kts_config* cfg, int k, double target, char** json) {
  return guard([&] {
    require(json, "json");
    namespace s = ktsieve::sieve;
    s::AssemblyOptions assembly;
    assembly.threads = threads_of(cfg);
    const auto e = s::mk_escalate(k, target, {s::family_p2(), s::family_p2p3(), s::family_even(1)},
                                  {}, assembly);
    std::ostringstream os;
    os << "{\"target\":" << ktsieve::format_real(target)
       << ",\"reached\":" << (e.reached ? "true" : "false") << ",\"steps\":[";
    for (size_t i = 0; i < e.steps.size(); ++i) {
      const auto& st = e.steps[i];
      os << (i ? "," : "") << "{\"family\":\"" << st.family << "\",\"degree\":" << st.degree
         << ",\"basis_size\":" << st.basis_size << ",\"ratio\":" << fixed10(st.ratio)
         << ",\"certified_above_target\":" << (st.certified_above_target ? "true" : "false") << '}';
    }
    os << "],\"best\":" << rayleigh_json(e.best) << '}';
    *json = dup_string(os.str());
  });
}

kts_status kts_gpy_closed_form(int k, int l, double* value, char** exact) {
  return guard([&] {
    const auto r = ktsieve::sieve::gpy_closed_form(k, l);
    if (value) *value = r.get_d();
    if (exact) *exact = dup_string(r.get_str());
  });
}

kts_status kts_expected_primes_value(double ratio, double theta, kts_expected_primes* out) {
  return guard([&] {
    require(out, "out");
    const auto e = ktsieve::sieve::expected_primes(ratio, theta);
    *out = {e.expectation, e.guaranteed, e.conclusive ? 1 : 0};
  });
}

kts_status kts_g_constraints_value(double k, kts_g_constraints* out) {
  return guard([&] {
    require(out, "out");
    const auto c = ktsieve::sieve::g_constraints(ktsieve::sieve::make_gspec(k));
    *out = {c.m1_int, c.norm, c.m2_int, c.l1_sq};
  });
}

kts_status kts_monte_carlo_I(const kts_config* cfg, double k, uint64_t samples, uint64_t seed,
                             double* estimate, double* std_err) {
  return guard([&] {
    const auto m = ktsieve::sieve::monte_carlo_I(ktsieve::sieve::make_gspec(k), samples, seed,
                                                 threads_of(cfg));
    if (estimate) *estimate = m.estimate;
    if (std_err) *std_err = m.std_err;
  });
}

kts_status kts_empirical_weights(const kts_config* cfg, const kts_prime_table* table,
                                 const int64_t* offsets, size_t count, uint64_t x, uint64_t r,
                                 int a, const int* signature, size_t signature_length,
                                 kts_weights* out) {
  return guard([&] {
    require(table, "table");
    require(out, "out");
    if (count > 0) require(offsets, "offsets");
    if (signature_length > 0) require(signature, "signature");
    ktsieve::sieve::Signature sig(signature, signature + signature_length);
    const auto poly = ktsieve::sieve::SymPoly::term(static_cast<int>(count), a, sig);
    const auto w = ktsieve::sieve::empirical_weights(std::span<const int64_t>(offsets, count), x,
                                                     r, poly, table->table, threads_of(cfg));
    *out = {w.expectation, w.prediction, w.ratio, w.uniform_expectation, w.min_nu,
            w.divisor_tuples};
  });
}

kts_status kts_interval_stats_value(const kts_config* cfg, const kts_liouville_table* table,
                                    uint64_t X, uint64_t h, double c, kts_interval_stats* out) {
  return guard([&] {
    require(table, "table");
    require(out, "out");
    *out = to_c(ktsieve::liouville::interval_stats(table->table, X, h, c, threads_of(cfg)));
  });
}

kts_status kts_exp_sum_stats(const kts_config* cfg, const kts_liouville_table* table, uint64_t X,
                             uint64_t h, double theta, double c, kts_interval_stats* out) {
  return guard([&] {
    require(table, "table");
    require(out, "out");
    *out = to_c(
        ktsieve::liouville::exp_sum_stats(table->table, X, h, theta, c, threads_of(cfg)));
  });
}

kts_status kts_chowla_scan(const kts_liouville_table* table, const uint64_t* xs, size_t count,
                           uint64_t shift, kts_chowla_point* out) {
  return guard([&] {
    require(table, "table");
    if (count > 0) {
      require(xs, "xs");
      require(out, "out");
    }
    const auto pts =
        ktsieve::liouville::chowla_scan(table->table, std::span<const uint64_t>(xs, count), shift);
    for (size_t i = 0; i < pts.size(); ++i) {
      out[i] = {pts[i].x, pts[i].shift, pts[i].log_avg, pts[i].plain_avg};
    }
  });
}

kts_status kts_small_factor_density(const kts_config* cfg, const kts_prime_table* table,
                                    uint64_t X, uint64_t h, kts_small_factors* out) {
  return guard([&] {
    require(table, "table");
    require(out, "out");
    const auto s = ktsieve::liouville::small_factor_density(table->table, X, h, threads_of(cfg));
    *out = {s.fraction_with_factor, s.mean_count, s.mertens_sum};
  });
}

kts_status kts_dirichlet_mean_value(const kts_config* cfg, const double* coeffs, size_t count,
                                    double T, double grid_step, double* out) {
  return guard([&] {
    require(out, "out");
    if (count > 0) require(coeffs, "coeffs");
    *out = ktsieve::liouville::dirichlet_mean_value(std::span<const double>(coeffs, count), T,
                                                    grid_step, threads_of(cfg));
  });
}

kts_status kts_reproduce(const kts_config* cfg, int check_determinism, int log_timings,
                         char** report, int* all_passed) {
  return guard([&] {
    require(report, "report");
    ktsieve::ReproduceOptions opts;
    const auto t = options_of(cfg);
    opts.threads = t.threads;
    opts.cache_dir = t.cache_dir;
    opts.memory_budget = t.memory_budget;
    opts.check_determinism = check_determinism != 0;
    if (log_timings) {
      opts.timing = [](const std::string& line) { std::fprintf(stderr, "timing: %s\n", line.c_str()); };
    }
    const auto r = ktsieve::reproduce(opts);
    *report = dup_string(r.text());
    if (all_passed) *all_passed = r.all_passed() ? 1 : 0;
  });
}

}  // extern "C"
