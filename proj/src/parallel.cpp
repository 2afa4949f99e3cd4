#include "slosc/parallel.hpp"

#include <cstdlib>
#include <string>

namespace slosc {

unsigned thread_limit() {
  if (const char* env = std::getenv("SLOSC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace slosc
