#include "dce3/error.hpp"
#include "dce3/kernels.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace dce3::kernels {

#ifndef DCE3_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_supports_avx2() {
#if defined(DCE3_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
  if (avx2_table() != nullptr && cpu_supports_avx2()) tables.push_back(avx2_table());
  return tables;
}

namespace {

const KernelTable* find_table(std::string_view name) {
  for (const KernelTable* t : available_tables()) {
    if (name == t->name) return t;
  }
  return nullptr;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("DCE3_KERNELS"); env != nullptr && *env != '\0') {
    if (const KernelTable* t = find_table(env)) return t;
    throw ConfigError(fmt::format("DCE3_KERNELS={} is not available on this machine", env));
  }
  const auto tables = available_tables();
  return tables.back();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(std::string_view name) {
  const KernelTable* t = find_table(name);
  if (t == nullptr) {
    throw ConfigError(fmt::format("kernel table '{}' is not available on this machine", name));
  }
  current().store(t, std::memory_order_release);
}

}  // namespace dce3::kernels
