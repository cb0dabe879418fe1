// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "rieszlab/simd/dispatch.hpp"

#include <cassert>
#include <cstdlib>
#include <string>

namespace rieszlab::simd {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(RIESZLAB_HAVE_AVX2)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(RIESZLAB_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect() {
  if (const char* forced = std::getenv("RIESZLAB_SIMD")) {
    const std::string want(forced);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && cpu_supports(Isa::Avx2)) return Isa::Avx2;
    if (want == "neon" && cpu_supports(Isa::Neon)) return Isa::Neon;
  }
  if (cpu_supports(Isa::Avx2)) return Isa::Avx2;
  if (cpu_supports(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

const detail::KernelTable& table_for(Isa isa) {
  switch (isa) {
#if defined(RIESZLAB_HAVE_AVX2)
    case Isa::Avx2:
      if (cpu_supports(Isa::Avx2)) return detail::avx2_kernels();
      break;
#endif
#if defined(RIESZLAB_HAVE_NEON)
    case Isa::Neon:
      return detail::neon_kernels();
#endif
    default:
      break;
  }
  return detail::scalar_kernels();
}

const detail::KernelTable& active_table() {
  static const detail::KernelTable& table = table_for(active_isa());
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) { return cpu_supports(isa); }

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active_table().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) { return active_table().sum(a.data(), a.size()); }

double sum_abs(std::span<const double> a) {
  return active_table().sum_abs(a.data(), a.size());
}

double dot(Isa isa, std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return table_for(isa).dot(a.data(), b.data(), a.size());
}

double sum(Isa isa, std::span<const double> a) { return table_for(isa).sum(a.data(), a.size()); }

double sum_abs(Isa isa, std::span<const double> a) {
  return table_for(isa).sum_abs(a.data(), a.size());
}

}  // namespace rieszlab::simd
