#include <atomic>
#include <cstdlib>
#include <string>

#include "chartensor/kernels.hpp"

namespace chartensor::kernels {

#if defined(CHARTENSOR_HAVE_AVX2)
namespace detail {
const KernelTable& avx2_table();
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(CHARTENSOR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* resolve(const std::string& name) {
  if (name == "scalar") return &scalar_kernels();
  if (name == "avx2") return avx2_kernels();
  if (name == "auto" || name.empty()) {
    if (const auto* k = avx2_kernels()) return k;
    return &scalar_kernels();
  }
  return nullptr;
}

const KernelTable* initial_selection() {
  const char* env = std::getenv("CHARTENSOR_KERNELS");
  const KernelTable* k = resolve(env ? env : "auto");
  return k ? k : resolve("auto");
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_selection()};
  return table;
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(CHARTENSOR_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() { return *current().load(); }

bool select_kernels(const std::string& name) {
  const KernelTable* k = resolve(name);
  if (!k) return false;
  current().store(k);
  return true;
}

}  // namespace chartensor::kernels
