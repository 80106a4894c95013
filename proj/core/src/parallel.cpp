#include "talkprofiler/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace talkprofiler {

std::size_t max_threads() {
  static const std::size_t cap = [] {
    std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TALKPROFILER_THREADS")) {
      char* end = nullptr;
      const unsigned long parsed = std::strtoul(env, &end, 10);
      if (end != env && *end == '\0' && parsed >= 1) {
        n = std::min<std::size_t>(n, parsed);
      }
    }
    return n;
  }();
  return cap;
}

}  // namespace talkprofiler
