// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Reduction kernels used by the quadrature inner loops.
//
// Every kernel has a scalar reference implementation (plain left-to-right
// accumulation) and, where the target supports it, a vector variant.  The
// variant is chosen once per process from the CPU features, or forced with the
// RIESZLAB_SIMD environment variable ("scalar", "avx2", "neon").  Vector
// variants reduce in a fixed lane order, so results are reproducible for a
// given ISA but may differ from the scalar path in the last few ulps.

namespace rieszlab::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

// True when the variant was compiled in and the CPU supports it.
bool isa_available(Isa isa);

// The ISA used by the dispatching entry points below.
Isa active_isa();

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double sum_abs(std::span<const double> a);

// Explicit-ISA entry points, for equivalence testing.  Calling with an ISA
// that is not available falls back to the scalar kernel.
double dot(Isa isa, std::span<const double> a, std::span<const double> b);
double sum(Isa isa, std::span<const double> a);
double sum_abs(Isa isa, std::span<const double> a);

namespace detail {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
};

const KernelTable& scalar_kernels();
#if defined(RIESZLAB_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(RIESZLAB_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

}  // namespace detail
}  // namespace rieszlab::simd
