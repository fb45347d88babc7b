// Runtime backend selection. This translation unit is compiled without
// -mavx2 so it is safe to execute on any CPU; the AVX2 table is only handed
// out after a cpuid check.

#include <atomic>
#include <cstdlib>
#include <string>

#include "occkit/kernels.hpp"

namespace occkit::kernels {

extern const Backend kAvx2Backend;
extern const bool kAvx2Compiled;

namespace {

bool cpu_has_avx2() {
#if (defined(__GNUC__) || defined(__clang__)) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const Backend* resolve_default() {
  if (const char* env = std::getenv("OCCKIT_KERNELS")) {
    const std::string name(env);
    if (name == "scalar") return &scalar_backend();
    if (name == "avx2" && kAvx2Compiled && cpu_has_avx2()) return &kAvx2Backend;
    // Unknown or unavailable request: fall through to autodetection.
  }
  if (kAvx2Compiled && cpu_has_avx2()) return &kAvx2Backend;
  return &scalar_backend();
}

std::atomic<const Backend*>& selected() {
  static std::atomic<const Backend*> backend{resolve_default()};
  return backend;
}

}  // namespace

const Backend* avx2_backend() {
  return (kAvx2Compiled && cpu_has_avx2()) ? &kAvx2Backend : nullptr;
}

const Backend& active() { return *selected().load(std::memory_order_acquire); }

bool select(const std::string& name) {
  if (name == "scalar") {
    selected().store(&scalar_backend(), std::memory_order_release);
    return true;
  }
  if (name == "avx2") {
    if (const Backend* b = avx2_backend()) {
      selected().store(b, std::memory_order_release);
      return true;
    }
    return false;
  }
  return false;
}

}  // namespace occkit::kernels
