/* Copyright 2026 The ktsieve Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the ktsieve library. Every function returns a kts_status;
 * on failure kts_last_error() describes the problem for the calling thread.
 * Strings returned through char** belong to the caller: release them with
 * kts_string_free.
 */
#ifndef KTSIEVE_KTSIEVE_H
#define KTSIEVE_KTSIEVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KTSIEVE_BUILDING)
#    define KTS_API __declspec(dllexport)
#  else
#    define KTS_API __declspec(dllimport)
#  endif
#else
#  define KTS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kts_status {
  KTS_OK = 0,
  KTS_ERR_VALIDATION = 1,
  KTS_ERR_RANGE = 2,
  KTS_ERR_RESOURCE = 3,
  KTS_ERR_NUMERIC = 4,
  KTS_ERR_NOT_FOUND = 5,
  KTS_ERR_BASIS = 6,
  KTS_ERR_IO = 7,
  KTS_ERR_INTERNAL = 8
} kts_status;

typedef enum kts_format { KTS_FORMAT_CSV = 0, KTS_FORMAT_JSON = 1 } kts_format;

typedef struct kts_config kts_config;
typedef struct kts_prime_table kts_prime_table;
typedef struct kts_liouville_table kts_liouville_table;

KTS_API const char* kts_version(void);
KTS_API const char* kts_last_error(void);
KTS_API const char* kts_status_name(kts_status status);
KTS_API void kts_string_free(char* s);

/* Run configuration. Defaults: 1 thread, no cache, 2 GiB budget,
 * 2^20-bit segments. */
KTS_API kts_status kts_config_new(kts_config** out);
KTS_API void kts_config_free(kts_config* cfg);
KTS_API kts_status kts_config_set_threads(kts_config* cfg, unsigned threads);
KTS_API kts_status kts_config_set_cache_dir(kts_config* cfg, const char* dir);
KTS_API kts_status kts_config_set_memory_budget(kts_config* cfg, uint64_t bytes);
KTS_API kts_status kts_config_set_segment_bits(kts_config* cfg, uint64_t bits);

/* Tables. */
KTS_API kts_status kts_prime_table_build(const kts_config* cfg, uint64_t limit,
                                         kts_prime_table** out);
KTS_API void kts_prime_table_free(kts_prime_table* table);
KTS_API uint64_t kts_prime_table_limit(const kts_prime_table* table);
KTS_API kts_status kts_is_prime(const kts_prime_table* table, uint64_t n, int* out);
KTS_API kts_status kts_prime_count(const kts_prime_table* table, uint64_t x,
                                   uint64_t* out);

KTS_API kts_status kts_liouville_build(const kts_config* cfg, uint64_t limit,
                                       kts_liouville_table** out);
KTS_API void kts_liouville_free(kts_liouville_table* table);
KTS_API kts_status kts_liouville_value(const kts_liouville_table* table, uint64_t n,
                                       int* out);

/* Twin-prime statistics. */
typedef struct kts_singular_series {
  double value;
  uint64_t truncation_prime;
  double tail_bound;
} kts_singular_series;

typedef struct kts_cramer {
  double naive;
  double corrected;
  double monte_carlo_mean;
  double monte_carlo_std;
} kts_cramer;

KTS_API kts_status kts_count_twins(const kts_config* cfg, const kts_prime_table* table,
                                   uint64_t x, uint64_t* out);
KTS_API kts_status kts_singular_series_value(double target_abs_err,
                                             kts_singular_series* out);
KTS_API kts_status kts_singular_series_truncated(uint64_t max_prime,
                                                 kts_singular_series* out);
KTS_API kts_status kts_li2(double x, double rel_err, double* out);
KTS_API kts_status kts_twin_table(const kts_config* cfg, const kts_prime_table* table,
                                  const uint64_t* xs, size_t count, kts_format format,
                                  char** report);
KTS_API kts_status kts_brun_partial(const kts_config* cfg, const kts_prime_table* table,
                                    uint64_t x, double* out);
KTS_API kts_status kts_circle_check(const kts_prime_table* table, uint64_t x,
                                    uint64_t* out);
KTS_API kts_status kts_cramer_estimates(const kts_config* cfg, double x, uint64_t trials,
                                        uint64_t seed, kts_cramer* out);

/* Admissible tuples. */
typedef struct kts_admissibility {
  int admissible;
  int64_t blocking_prime; /* 0 when admissible */
  int64_t prime_bound;
} kts_admissibility;

KTS_API kts_status kts_check_admissible(const int64_t* offsets, size_t count,
                                        kts_admissibility* out);
/* JSON certificate including the witness residues. */
KTS_API kts_status kts_check_admissible_json(const int64_t* offsets, size_t count,
                                             char** json);
/* Writes up to capacity offsets; *length receives the tuple size. */
KTS_API kts_status kts_narrowest_tuple(const kts_config* cfg, int k, int64_t search_bound,
                                       int64_t* offsets, size_t capacity, size_t* length);
KTS_API kts_status kts_primes_after_k(const kts_prime_table* table, int k,
                                      int64_t* offsets, size_t capacity, size_t* length);
KTS_API kts_status kts_verify_paper_tuple(kts_admissibility* out, size_t* k,
                                          int64_t* diameter);

/* Sieve optimization. family is one of "p2", "p2p3", "even", "full". */
typedef struct kts_rayleigh {
  double ratio;
  double residual;
  int degree;
  size_t basis_size;
  int certified_above_4;
} kts_rayleigh;

KTS_API kts_status kts_mk_lower_bound(const kts_config* cfg, int k, int degree,
                                      const char* family, kts_rayleigh* out);
/* JSON {ratio, degree, basis_size, residual, coefficients, ...}. */
KTS_API kts_status kts_mk_lower_bound_json(const kts_config* cfg, int k, int degree,
                                           const char* family, char** json);
/* Escalates p2, p2p3, even until the certified ratio exceeds target. */
KTS_API kts_status kts_mk_escalate_json(const kts_config* cfg, int k, double target,
                                        char** json);
/* Exact value as "num/den" plus its double. */
KTS_API kts_status kts_gpy_closed_form(int k, int l, double* value, char** exact);

typedef struct kts_expected_primes {
  double expectation;
  int guaranteed;
  int conclusive;
} kts_expected_primes;

KTS_API kts_status kts_expected_primes_value(double ratio, double theta,
                                             kts_expected_primes* out);

typedef struct kts_g_constraints {
  double m1_int; /* int t G^2 */
  double norm;   /* int G^2 */
  double m2_int; /* k int t^2 G^2 */
  double l1_sq;  /* k (int G)^2 */
} kts_g_constraints;

KTS_API kts_status kts_g_constraints_value(double k, kts_g_constraints* out);
KTS_API kts_status kts_monte_carlo_I(const kts_config* cfg, double k, uint64_t samples,
                                     uint64_t seed, double* estimate, double* std_err);

typedef struct kts_weights {
  double expectation;
  double prediction;
  double ratio;
  double uniform_expectation;
  double min_nu;
  uint64_t divisor_tuples;
} kts_weights;

/* Ftilde = (1 - P1)^a * P_{signature[0]} * ... on the simplex. */
KTS_API kts_status kts_empirical_weights(const kts_config* cfg, const kts_prime_table* table,
                                         const int64_t* offsets, size_t count, uint64_t x,
                                         uint64_t r, int a, const int* signature,
                                         size_t signature_length, kts_weights* out);

/* Liouville statistics. */
typedef struct kts_interval_stats {
  uint64_t X;
  uint64_t h;
  double threshold_const;
  double exceed_fraction;
  double mean_abs_normalized;
} kts_interval_stats;

typedef struct kts_chowla_point {
  uint64_t x;
  uint64_t shift;
  double log_avg;
  double plain_avg;
} kts_chowla_point;

typedef struct kts_small_factors {
  double fraction_with_factor;
  double mean_count;
  double mertens_sum;
} kts_small_factors;

KTS_API kts_status kts_interval_stats_value(const kts_config* cfg,
                                            const kts_liouville_table* table, uint64_t X,
                                            uint64_t h, double c, kts_interval_stats* out);
KTS_API kts_status kts_exp_sum_stats(const kts_config* cfg, const kts_liouville_table* table,
                                     uint64_t X, uint64_t h, double theta, double c,
                                     kts_interval_stats* out);
KTS_API kts_status kts_chowla_scan(const kts_liouville_table* table, const uint64_t* xs,
                                   size_t count, uint64_t shift, kts_chowla_point* out);
KTS_API kts_status kts_small_factor_density(const kts_config* cfg,
                                            const kts_prime_table* table, uint64_t X,
                                            uint64_t h, kts_small_factors* out);
KTS_API kts_status kts_dirichlet_mean_value(const kts_config* cfg, const double* coeffs,
                                            size_t count, double T, double grid_step,
                                            double* out);

/* Acceptance suite. The report is deterministic; timing lines go to stderr
 * when log_timings is nonzero. */
KTS_API kts_status kts_reproduce(const kts_config* cfg, int check_determinism,
                                 int log_timings, char** report, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* KTSIEVE_KTSIEVE_H */
