#include <cstdlib>
#include <string>

#include "epm/kernels.hpp"

namespace epm::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const Kernels* g_active = nullptr;

const Kernels* pick_default() {
  if (const char* env = std::getenv("EPM_KERNELS")) {
    std::string want(env);
    if (want == "scalar") return &scalar();
    if (want == "avx2" && avx2()) return avx2();
  }
  if (const Kernels* k = avx2()) return k;
  return &scalar();
}

}  // namespace

const Kernels& active() {
  if (!g_active) g_active = pick_default();
  return *g_active;
}

bool set_active(const std::string& name) {
  if (name == "scalar") {
    g_active = &scalar();
    return true;
  }
  if (name == "avx2") {
    if (const Kernels* k = avx2()) {
      g_active = k;
      return true;
    }
    return false;
  }
  return false;
}

}  // namespace epm::kernels
