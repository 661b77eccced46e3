// Runs the acceptance suite through the C API and prints one PASS/FAIL line
// per criterion. Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <thread>

#include "ktsieve/ktsieve.h"

int main() {
  kts_config* cfg = nullptr;
  if (kts_config_new(&cfg) != KTS_OK) return 2;
  const unsigned threads = std::thread::hardware_concurrency();
  kts_config_set_threads(cfg, threads ? threads : 1);
  if (const char* dir = std::getenv("KTSIEVE_CACHE_DIR")) kts_config_set_cache_dir(cfg, dir);

  char* report = nullptr;
  int passed = 0;
  const kts_status s = kts_reproduce(cfg, 1, 1, &report, &passed);
  kts_config_free(cfg);
  if (s != KTS_OK) {
    std::fprintf(stderr, "acceptance: %s: %s\n", kts_status_name(s), kts_last_error());
    return 2;
  }
  std::fputs(report, stdout);
  kts_string_free(report);
  return passed ? 0 : 1;
}
