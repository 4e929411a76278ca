/*
 * Copyright 2026 The ergo-bounds Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Data-parallel inner loops used by the chain propagation code. Every kernel
// has a scalar reference; vector variants are picked once at runtime from what
// the CPU reports. Set ERGO_BOUNDS_SIMD=scalar to pin the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace ergo::simd
{

enum class Isa
{
    scalar,
    avx2,
    neon,
};

std::string_view to_string(Isa isa);

struct Kernels
{
    Isa isa;
    /// y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    /// sum_i |x_i - y_i| * w_i
    double (*weighted_abs_diff)(const double* x, const double* y, const double* w,
                                std::size_t n);
    double (*sum)(const double* x, std::size_t n);
};

/// Kernel table for a specific ISA, or nullptr when it is not compiled in or
/// the running CPU lacks it.
const Kernels* kernels_for(Isa isa);

const Kernels& active();

inline void axpy(double a, std::span<const double> x, std::span<double> y)
{
    active().axpy(a, x.data(), y.data(), y.size());
}

inline double dot(std::span<const double> x, std::span<const double> y)
{
    return active().dot(x.data(), y.data(), x.size());
}

inline double weighted_abs_diff(std::span<const double> x, std::span<const double> y,
                                std::span<const double> w)
{
    return active().weighted_abs_diff(x.data(), y.data(), w.data(), x.size());
}

inline double sum(std::span<const double> x)
{
    return active().sum(x.data(), x.size());
}

namespace detail
{
extern const Kernels scalar_kernels;
#if defined(ERGO_HAVE_AVX2)
extern const Kernels avx2_kernels;
#endif
#if defined(ERGO_HAVE_NEON)
extern const Kernels neon_kernels;
#endif
}  // namespace detail

}  // namespace ergo::simd
