// Copyright 2026 The ktsieve Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the library only through ktsieve.h.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ktsieve/ktsieve.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;
constexpr int kExitUsage = 64;

struct StatusError {
  kts_status status;
  std::string message;
};

void check(kts_status s) {
  if (s != KTS_OK) throw StatusError{s, kts_last_error()};
}

[[noreturn]] void invalid(const std::string& message) {
  throw StatusError{KTS_ERR_VALIDATION, message};
}

int exit_code(kts_status s) {
  switch (s) {
    case KTS_OK: return 0;
    case KTS_ERR_VALIDATION:
    case KTS_ERR_RANGE: return kExitValidation;
    case KTS_ERR_RESOURCE: return kExitResource;
    default: return kExitFailure;
  }
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { kts_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using Config = std::unique_ptr<kts_config, decltype(&kts_config_free)>;
using Primes = std::unique_ptr<kts_prime_table, decltype(&kts_prime_table_free)>;
using Liouville = std::unique_ptr<kts_liouville_table, decltype(&kts_liouville_free)>;

// Integer flags accept scientific notation such as 1e6.
std::uint64_t to_count(const std::string& text, const char* name) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    invalid(std::string(name) + ": not a number: " + text);
  }
  if (used != text.size() || !(v >= 0) || v > 9.007199254740992e15 || v != std::floor(v)) {
    invalid(std::string(name) + ": expected a non-negative integer, got " + text);
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::uint64_t> to_counts(const std::string& text, const char* name) {
  std::vector<std::uint64_t> out;
  for (const auto& s : split(text)) out.push_back(to_count(s, name));
  if (out.empty()) invalid(std::string(name) + ": empty list");
  return out;
}

std::vector<std::int64_t> to_tuple(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& s : split(text)) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      invalid("tuple: not an integer: " + s);
    }
    if (used != s.size()) invalid("tuple: not an integer: " + s);
    out.push_back(v);
  }
  if (out.empty()) invalid("tuple: no offsets given");
  return out;
}

std::string real(double v, const char* fmt = "%.10g") {
  if (v == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string fixed10(double v) { return real(v, "%.10f"); }

// A small table emitted as CSV or as JSON. Single-row tables become a JSON
// object rather than an array.
class Report {
 public:
  explicit Report(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  struct Cell {
    std::string text;
    bool quoted = false;
  };

  void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

  std::string render(kts_format format, bool single = false) const {
    std::ostringstream os;
    if (format == KTS_FORMAT_CSV) {
      for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
      os << '\n';
      for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].text;
        os << '\n';
      }
      return os.str();
    }
    if (!single) os << '[';
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      os << (r ? "," : "") << '{';
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        const auto& c = rows_[r][i];
        os << (i ? "," : "") << '"' << columns_[i] << "\":";
        if (c.quoted) os << '"' << c.text << '"';
        else os << c.text;
      }
      os << '}';
    }
    if (!single) os << ']';
    os << '\n';
    return os.str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

Report::Cell num(double v) { return {real(v)}; }
Report::Cell num(std::uint64_t v) { return {std::to_string(v)}; }
Report::Cell num(std::int64_t v) { return {std::to_string(v)}; }
Report::Cell text(std::string s) { return {std::move(s), true}; }
Report::Cell flag(bool b) { return {b ? "true" : "false"}; }

std::string tuple_text(const std::vector<std::int64_t>& t, kts_format format) {
  std::ostringstream os;
  const char* sep = format == KTS_FORMAT_JSON ? "," : " ";
  if (format == KTS_FORMAT_JSON) os << '[';
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? sep : "") << t[i];
  if (format == KTS_FORMAT_JSON) os << ']';
  return os.str();
}

struct Globals {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string cache_dir;
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::string memory_budget = "2147483648";

  kts_format fmt() const { return format == "json" ? KTS_FORMAT_JSON : KTS_FORMAT_CSV; }

  Config config() const {
    kts_config* raw = nullptr;
    check(kts_config_new(&raw));
    Config cfg(raw, kts_config_free);
    check(kts_config_set_threads(raw, threads));
    check(kts_config_set_cache_dir(raw, cache_dir.c_str()));
    check(kts_config_set_memory_budget(raw, to_count(memory_budget, "--memory-budget")));
    return cfg;
  }
};

Primes prime_table(const kts_config* cfg, std::uint64_t limit) {
  kts_prime_table* raw = nullptr;
  check(kts_prime_table_build(cfg, limit, &raw));
  return Primes(raw, kts_prime_table_free);
}

Liouville liouville_table(const kts_config* cfg, std::uint64_t limit) {
  kts_liouville_table* raw = nullptr;
  check(kts_liouville_build(cfg, limit, &raw));
  return Liouville(raw, kts_liouville_free);
}

void emit(const std::string& s) { std::fwrite(s.data(), 1, s.size(), stdout); }

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  if (const char* env = std::getenv("KTSIEVE_CACHE_DIR")) g.cache_dir = env;

  CLI::App app{"ktsieve: twin primes, admissible tuples, sieve optimization and Liouville statistics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", g.threads, "Worker threads (default: available cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", g.cache_dir,
                 "Directory for cached sieve tables; KTSIEVE_CACHE_DIR sets the default "
                 "(default: no cache)");
  app.add_option("--format", g.format, "Output format (default: csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "Random seed for Monte Carlo commands (default: 0)");
  app.add_option("--memory-budget", g.memory_budget,
                 "Upper bound in bytes for in-memory tables (default: 2147483648)");

  std::function<void()> action;

  // twin-table
  std::string tt_max = "1e8";
  bool tt_long = false;
  auto* tt = app.add_subcommand("twin-table", "pi2(x) against S*Li2(x) at x = 10, 100, ..., max");
  tt->add_option("--max", tt_max, "Largest power of ten (default: 1e8)");
  tt->add_flag("--allow-long", tt_long, "Permit rows beyond 1e8 (slow, large memory)");
  tt->callback([&] {
    action = [&] {
      const auto max = to_count(tt_max, "--max");
      if (max < 10) invalid("--max must be at least 10");
      if (max > 100000000 && !tt_long) invalid("rows beyond 1e8 need --allow-long");
      std::vector<std::uint64_t> xs;
      for (std::uint64_t x = 10; x <= max; x *= 10) {
        xs.push_back(x);
        if (x > max / 10) break;
      }
      auto cfg = g.config();
      auto table = prime_table(cfg.get(), xs.back() + 3);
      OwnedString out;
      check(kts_twin_table(cfg.get(), table.get(), xs.data(), xs.size(), g.fmt(), &out.p));
      emit(out.str());
    };
  });

  // brun
  std::string brun_x = "1e8";
  auto* brun = app.add_subcommand("brun", "Partial sums of reciprocals of twin primes");
  brun->add_option("--x", brun_x, "Comma-separated bounds (default: 1e8)");
  brun->callback([&] {
    action = [&] {
      const auto xs = to_counts(brun_x, "--x");
      auto cfg = g.config();
      std::uint64_t top = 0;
      for (auto x : xs) top = std::max(top, x);
      auto table = prime_table(cfg.get(), top + 3);
      Report r({"x", "brun_partial"});
      for (auto x : xs) {
        double b = 0;
        check(kts_brun_partial(cfg.get(), table.get(), x, &b));
        r.add({num(x), {real(b, "%.12f")}});
      }
      emit(r.render(g.fmt()));
    };
  });

  // circle-check
  std::string cc_x = "10,100,1000,10000,100000";
  auto* cc = app.add_subcommand("circle-check",
                                "Twin counts from the FFT autocorrelation versus direct counts");
  cc->add_option("--x", cc_x, "Comma-separated bounds (default: 10,100,1000,10000,100000)");
  cc->callback([&] {
    action = [&] {
      const auto xs = to_counts(cc_x, "--x");
      auto cfg = g.config();
      std::uint64_t top = 0;
      for (auto x : xs) top = std::max(top, x);
      auto table = prime_table(cfg.get(), top + 3);
      Report r({"x", "circle", "direct", "match"});
      for (auto x : xs) {
        std::uint64_t circle = 0, direct = 0;
        check(kts_circle_check(table.get(), x, &circle));
        check(kts_count_twins(cfg.get(), table.get(), x, &direct));
        r.add({num(x), num(circle), num(direct), flag(circle == direct)});
      }
      emit(r.render(g.fmt()));
    };
  });

  // cramer
  std::string cr_x = "1e4";
  std::uint64_t cr_trials = 200;
  auto* cr = app.add_subcommand("cramer", "Naive, corrected and simulated Cramer-model twin counts");
  cr->add_option("--x", cr_x, "Bound (default: 1e4)");
  cr->add_option("--trials", cr_trials, "Monte Carlo trials (default: 200)")
      ->check(CLI::PositiveNumber);
  cr->callback([&] {
    action = [&] {
      const auto x = to_count(cr_x, "--x");
      auto cfg = g.config();
      kts_cramer c{};
      check(kts_cramer_estimates(cfg.get(), static_cast<double>(x), cr_trials, g.seed, &c));
      Report r({"x", "trials", "seed", "naive", "corrected", "mc_mean", "mc_std"});
      r.add({num(x), num(cr_trials), num(g.seed), num(c.naive), num(c.corrected),
             num(c.monte_carlo_mean), num(c.monte_carlo_std)});
      emit(r.render(g.fmt(), true));
    };
  });

  // tuple ...
  auto* tuple = app.add_subcommand("tuple", "Admissible tuples");
  tuple->require_subcommand(1);

  std::string tc_offsets;
  auto* tc = tuple->add_subcommand("check", "Admissibility certificate for a tuple");
  tc->add_option("--tuple", tc_offsets, "Comma-separated offsets, e.g. 0,2,6")->required();
  tc->callback([&] {
    action = [&] {
      const auto t = to_tuple(tc_offsets);
      if (g.fmt() == KTS_FORMAT_JSON) {
        OwnedString out;
        check(kts_check_admissible_json(t.data(), t.size(), &out.p));
        emit(out.str() + "\n");
        return;
      }
      kts_admissibility a{};
      check(kts_check_admissible(t.data(), t.size(), &a));
      Report r({"k", "diameter", "admissible", "blocking_prime", "prime_bound"});
      r.add({num(static_cast<std::uint64_t>(t.size())), num(t.back() - t.front()),
             flag(a.admissible), num(a.blocking_prime), num(a.prime_bound)});
      emit(r.render(g.fmt()));
    };
  });

  int tn_k = 0;
  std::int64_t tn_bound = 64;
  auto* tn = tuple->add_subcommand("narrowest", "Narrowest admissible k-tuple, 2 <= k <= 12");
  tn->add_option("--k", tn_k, "Tuple size")->required();
  tn->add_option("--bound", tn_bound, "Largest diameter searched (default: 64)");
  tn->callback([&] {
    action = [&] {
      auto cfg = g.config();
      std::vector<std::int64_t> t(static_cast<std::size_t>(std::max(tn_k, 0)));
      std::size_t n = 0;
      check(kts_narrowest_tuple(cfg.get(), tn_k, tn_bound, t.data(), t.size(), &n));
      t.resize(n);
      Report r({"k", "diameter", "tuple"});
      r.add({num(static_cast<std::uint64_t>(n)), num(t.back() - t.front()),
             {tuple_text(t, g.fmt())}});
      emit(r.render(g.fmt(), true));
    };
  });

  int tp_k = 0;
  auto* tp = tuple->add_subcommand("primes-after", "The first k primes greater than k");
  tp->add_option("--k", tp_k, "Tuple size")->required()->check(CLI::Range(2, 100000));
  tp->callback([&] {
    action = [&] {
      auto cfg = g.config();
      const double kk = tp_k;
      const auto limit = static_cast<std::uint64_t>(kk * (std::log(kk) + std::log(std::log(kk + 2)) + 3) + kk + 100);
      auto table = prime_table(cfg.get(), limit);
      std::vector<std::int64_t> t(static_cast<std::size_t>(tp_k));
      std::size_t n = 0;
      check(kts_primes_after_k(table.get(), tp_k, t.data(), t.size(), &n));
      t.resize(n);
      Report r({"k", "diameter", "tuple"});
      r.add({num(static_cast<std::uint64_t>(n)), num(t.back() - t.front()),
             {tuple_text(t, g.fmt())}});
      emit(r.render(g.fmt(), true));
    };
  });

  auto* tv = tuple->add_subcommand("verify-54", "Check the 54-element tuple of diameter 270");
  tv->callback([&] {
    action = [&] {
      kts_admissibility a{};
      std::size_t k = 0;
      std::int64_t d = 0;
      check(kts_verify_paper_tuple(&a, &k, &d));
      if (g.fmt() == KTS_FORMAT_JSON) {
        Report r({"admissible", "k", "diameter"});
        r.add({flag(a.admissible), num(static_cast<std::uint64_t>(k)), num(d)});
        emit(r.render(g.fmt(), true));
      } else {
        std::printf("%s, k=%zu, diameter=%lld\n", a.admissible ? "admissible" : "not admissible",
                    k, static_cast<long long>(d));
      }
    };
  });

  // mk
  int mk_k = 54;
  int mk_degree = 0;
  std::string mk_family = "p2";
  double mk_target = 0;
  auto* mk = app.add_subcommand("mk", "Largest ratio sum J / I over a polynomial basis");
  mk->add_option("--k", mk_k, "Tuple size (default: 54)");
  mk->add_option("--degree", mk_degree, "Basis degree (default: 0)");
  mk->add_option("--family", mk_family, "Basis family (default: p2)")
      ->check(CLI::IsMember({"p2", "p2p3", "even", "full"}));
  mk->add_option("--escalate", mk_target,
                 "Raise the degree through p2, p2p3 and even until the certified ratio "
                 "exceeds this target (default: off)");
  mk->callback([&] {
    action = [&] {
      auto cfg = g.config();
      if (mk_target > 0) {
        OwnedString out;
        check(kts_mk_escalate_json(cfg.get(), mk_k, mk_target, &out.p));
        emit(out.str() + "\n");
        return;
      }
      if (g.fmt() == KTS_FORMAT_JSON) {
        OwnedString out;
        check(kts_mk_lower_bound_json(cfg.get(), mk_k, mk_degree, mk_family.c_str(), &out.p));
        emit(out.str() + "\n");
        return;
      }
      kts_rayleigh r{};
      check(kts_mk_lower_bound(cfg.get(), mk_k, mk_degree, mk_family.c_str(), &r));
      Report rep({"k", "family", "degree", "basis_size", "ratio", "residual"});
      rep.add({num(static_cast<std::int64_t>(mk_k)), text(mk_family),
               num(static_cast<std::int64_t>(r.degree)),
               num(static_cast<std::uint64_t>(r.basis_size)), {fixed10(r.ratio)},
               num(r.residual)});
      emit(rep.render(g.fmt()));
    };
  });

  // gpy
  int gpy_k = 5, gpy_l = 0;
  auto* gpy = app.add_subcommand("gpy", "Closed-form ratio for the basis function (1 - P1)^l");
  gpy->add_option("--k", gpy_k, "Tuple size (default: 5)");
  gpy->add_option("--l", gpy_l, "Exponent (default: 0)");
  gpy->callback([&] {
    action = [&] {
      double v = 0;
      OwnedString exact;
      check(kts_gpy_closed_form(gpy_k, gpy_l, &v, &exact.p));
      Report r({"k", "l", "exact", "ratio"});
      r.add({num(static_cast<std::int64_t>(gpy_k)), num(static_cast<std::int64_t>(gpy_l)),
             text(exact.str()), {fixed10(v)}});
      emit(r.render(g.fmt(), true));
    };
  });

  // g-check
  std::string gc_k = "1e3,1e4,1e5,1e6";
  auto* gc = app.add_subcommand("g-check", "Integral constraints on the large-k function G");
  gc->add_option("--k", gc_k, "Comma-separated values of k (default: 1e3,1e4,1e5,1e6)");
  gc->callback([&] {
    action = [&] {
      Report r({"k", "norm", "int_tG2", "bound_1_over_3k", "k_int_t2G2", "k_int_G_sq"});
      for (auto k : to_counts(gc_k, "--k")) {
        kts_g_constraints c{};
        const double kd = static_cast<double>(k);
        check(kts_g_constraints_value(kd, &c));
        r.add({num(k), num(c.norm), num(c.m1_int), num(1.0 / (3.0 * kd)), num(c.m2_int),
               num(c.l1_sq)});
      }
      emit(r.render(g.fmt()));
    };
  });

  // weights
  std::string w_tuple = "0,2", w_x = "1e5", w_r = "30", w_sig;
  int w_a = 0;
  auto* w = app.add_subcommand("weights",
                               "Weighted prime count in n + h_1 against the sieve prediction");
  w->add_option("--tuple", w_tuple, "Comma-separated offsets (default: 0,2)");
  w->add_option("--x", w_x, "Range [x, 2x) (default: 1e5)");
  w->add_option("--r", w_r, "Sieve level R (default: 30)");
  w->add_option("--a", w_a, "Power of (1 - P1) in the sieve function (default: 0)");
  w->add_option("--signature", w_sig,
                "Comma-separated power sums P_j multiplied in (default: none)");
  w->callback([&] {
    action = [&] {
      const auto t = to_tuple(w_tuple);
      std::vector<int> sig;
      for (auto v : (w_sig.empty() ? std::vector<std::uint64_t>{} : to_counts(w_sig, "--signature"))) {
        sig.push_back(static_cast<int>(v));
      }
      const auto x = to_count(w_x, "--x");
      const auto rr = to_count(w_r, "--r");
      auto cfg = g.config();
      auto table = prime_table(cfg.get(), 2 * x + static_cast<std::uint64_t>(std::max<std::int64_t>(t.back(), 0)) + 2);
      kts_weights out{};
      check(kts_empirical_weights(cfg.get(), table.get(), t.data(), t.size(), x, rr, w_a,
                                  sig.data(), sig.size(), &out));
      Report r({"x", "r", "expectation", "prediction", "ratio", "uniform_expectation", "min_nu",
                "divisor_tuples"});
      r.add({num(x), num(rr), num(out.expectation), num(out.prediction), num(out.ratio),
             num(out.uniform_expectation), num(out.min_nu), num(out.divisor_tuples)});
      emit(r.render(g.fmt(), true));
    };
  });

  // liouville ...
  auto* lv = app.add_subcommand("liouville", "Liouville function statistics");
  lv->require_subcommand(1);

  std::string li_X = "1e6", li_h = "10,100,1000";
  double li_c = 1.0;
  auto* li = lv->add_subcommand("intervals", "Short-interval sums of lambda over [X, 2X]");
  li->set_help_flag("--help", "Print this help message and exit");
  li->add_option("--X", li_X, "Start of the range (default: 1e6)");
  li->add_option("--h", li_h, "Comma-separated window lengths (default: 10,100,1000)");
  li->add_option("--c", li_c, "Threshold constant c in c h / (log h)^0.1 (default: 1)");

  double le_theta = 0.5;
  auto* le = lv->add_subcommand("expsum", "Twisted short sums |sum lambda(n) e(n theta)|");
  le->set_help_flag("--help", "Print this help message and exit");
  le->add_option("--X", li_X, "Start of the range (default: 1e6)");
  le->add_option("--h", li_h, "Comma-separated window lengths (default: 10,100,1000)");
  le->add_option("--c", li_c, "Threshold constant (default: 1)");
  le->add_option("--theta", le_theta, "Frequency theta (default: 0.5)");

  auto run_windows = [&](bool twisted) {
    const auto X = to_count(li_X, "--X");
    const auto hs = to_counts(li_h, "--h");
    auto cfg = g.config();
    auto table = liouville_table(cfg.get(), 2 * X);
    std::vector<std::string> cols{"X", "h", "c"};
    if (twisted) cols.push_back("theta");
    cols.insert(cols.end(), {"exceed_fraction", "mean_abs"});
    Report r(cols);
    for (auto h : hs) {
      kts_interval_stats s{};
      if (twisted) check(kts_exp_sum_stats(cfg.get(), table.get(), X, h, le_theta, li_c, &s));
      else check(kts_interval_stats_value(cfg.get(), table.get(), X, h, li_c, &s));
      std::vector<Report::Cell> row{num(s.X), num(s.h), num(s.threshold_const)};
      if (twisted) row.push_back(num(le_theta));
      row.push_back(num(s.exceed_fraction));
      row.push_back(num(s.mean_abs_normalized));
      r.add(row);
    }
    emit(r.render(g.fmt()));
  };
  li->callback([&] { action = [&] { run_windows(false); }; });
  le->callback([&] { action = [&] { run_windows(true); }; });

  std::string lc_x = "1e4,1e5,1e6,1e7";
  std::uint64_t lc_shift = 2;
  auto* lc = lv->add_subcommand("chowla", "Logarithmic and plain two-point Chowla averages");
  lc->add_option("--x", lc_x, "Comma-separated bounds (default: 1e4,1e5,1e6,1e7)");
  lc->add_option("--shift", lc_shift, "Shift a in lambda(n) lambda(n + a) (default: 2)");
  lc->callback([&] {
    action = [&] {
      const auto xs = to_counts(lc_x, "--x");
      std::uint64_t top = 0;
      for (auto x : xs) top = std::max(top, x);
      auto cfg = g.config();
      auto table = liouville_table(cfg.get(), top + lc_shift);
      std::vector<kts_chowla_point> pts(xs.size());
      check(kts_chowla_scan(table.get(), xs.data(), xs.size(), lc_shift, pts.data()));
      Report r({"x", "shift", "log_avg", "plain_avg"});
      for (const auto& p : pts) r.add({num(p.x), num(p.shift), num(p.log_avg), num(p.plain_avg)});
      emit(r.render(g.fmt()));
    };
  });

  std::string ls_X = "1e6", ls_h = "1e4";
  auto* ls = lv->add_subcommand("small-factors",
                                "Prime factors in [h, 2h] among n in [X, 2X] versus Mertens");
  ls->set_help_flag("--help", "Print this help message and exit");
  ls->add_option("--X", ls_X, "Start of the range (default: 1e6)");
  ls->add_option("--h", ls_h, "Factor range start (default: 1e4)");
  ls->callback([&] {
    action = [&] {
      const auto X = to_count(ls_X, "--X");
      const auto h = to_count(ls_h, "--h");
      auto cfg = g.config();
      auto table = prime_table(cfg.get(), 2 * h + 2);
      kts_small_factors s{};
      check(kts_small_factor_density(cfg.get(), table.get(), X, h, &s));
      Report r({"X", "h", "fraction_with_factor", "mean_count", "mertens_sum"});
      r.add({num(X), num(h), num(s.fraction_with_factor), num(s.mean_count), num(s.mertens_sum)});
      emit(r.render(g.fmt(), true));
    };
  });

  std::string ld_N = "1000";
  double ld_T = 1000, ld_step = 0;
  auto* ld = lv->add_subcommand(
      "dirichlet-mv",
      "Exploratory: midpoint-rule mean value of |sum_{n<=N} lambda(n) n^{-it}|^2 over "
      "[T, 2T]; the quadrature error is not certified");
  ld->add_option("--N", ld_N, "Polynomial length (default: 1000)");
  ld->add_option("--T", ld_T, "Start of the t range (default: 1000)");
  ld->add_option("--step", ld_step, "Grid step (default: 1 / (4 log N))");
  ld->callback([&] {
    action = [&] {
      const auto N = to_count(ld_N, "--N");
      if (N < 1) invalid("--N must be at least 1");
      auto cfg = g.config();
      auto table = liouville_table(cfg.get(), N);
      std::vector<double> coeffs(N);
      for (std::uint64_t n = 1; n <= N; ++n) {
        int v = 0;
        check(kts_liouville_value(table.get(), n, &v));
        coeffs[n - 1] = v;
      }
      const double step = ld_step > 0 ? ld_step : (N > 1 ? 1.0 / (4.0 * std::log(double(N))) : 1.0);
      double mv = 0;
      check(kts_dirichlet_mean_value(cfg.get(), coeffs.data(), coeffs.size(), ld_T, step, &mv));
      Report r({"N", "T", "step", "mean_value", "bound_T_plus_N_times_N"});
      const double nd = static_cast<double>(N);
      r.add({num(N), num(ld_T), num(step), num(mv), num((ld_T + nd) * nd)});
      emit(r.render(g.fmt(), true));
    };
  });

  // reproduce
  bool rp_skip_det = false, rp_timings = false;
  auto* rp = app.add_subcommand("reproduce", "Run the full acceptance suite and print a pass/fail table");
  rp->add_flag("--skip-determinism", rp_skip_det,
               "Skip the rerun at other thread counts (criterion 11)");
  rp->add_flag("--timings", rp_timings, "Log per-criterion timings to stderr");
  rp->callback([&] {
    action = [&] {
      auto cfg = g.config();
      OwnedString out;
      int passed = 0;
      check(kts_reproduce(cfg.get(), rp_skip_det ? 0 : 1, rp_timings ? 1 : 0, &out.p, &passed));
      emit(out.str());
      if (!passed) throw StatusError{KTS_OK, ""};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ExtrasError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const CLI::RequiredError& e) {
    // A missing subcommand is a usage error; a missing option is a validation error.
    std::cerr << e.what() << "\n";
    const bool missing_command = app.get_subcommands().empty() ||
                                 (tuple->parsed() && tuple->get_subcommands().empty()) ||
                                 (lv->parsed() && lv->get_subcommands().empty());
    if (missing_command) {
      std::cerr << '\n' << app.help();
      return kExitUsage;
    }
    return kExitValidation;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }

  try {
    action();
  } catch (const StatusError& e) {
    if (e.status == KTS_OK) return kExitFailure;  // reproduce with failing criteria
    std::cerr << "error: " << kts_status_name(e.status) << ": " << e.message << '\n';
    return exit_code(e.status);
  }
  std::fflush(stdout);
  return 0;
}
