#include <cstdlib>
#include <string_view>

#include "fogbench/kernels.h"

namespace fogbench::kernels {

const Kernels* avx2_table_impl();  // defined in kernels_avx2.cpp

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels* table = cpu_has_avx2() ? avx2_table_impl() : nullptr;
  return table;
}

const Kernels& active_kernels() {
  static const Kernels* chosen = [] {
    if (const char* env = std::getenv("FOGBENCH_KERNELS")) {
      std::string_view want(env);
      if (want == "scalar") return &scalar_kernels();
      if (want == "avx2" && avx2_kernels()) return avx2_kernels();
    }
    return avx2_kernels() ? avx2_kernels() : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace fogbench::kernels
