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

// Built with -mavx2 only; FMA stays off so axpy matches the scalar path bit
// for bit. Reductions keep four lane accumulators and fold them in a fixed
// order.

#include <immintrin.h>

#include <cmath>

#include "ergo/simd.hpp"

namespace ergo::simd::detail
{
namespace
{

inline double hsum(__m256d v)
{
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n)
{
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i)
    {
        y[i] += a * x[i];
    }
}

double dot_avx2(const double* x, const double* y, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    double tail = 0.0;
    for (; i < n; ++i)
    {
        tail += x[i] * y[i];
    }
    return hsum(acc) + tail;
}

double weighted_abs_diff_avx2(const double* x, const double* y, const double* w, std::size_t n)
{
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        d = _mm256_andnot_pd(sign_mask, d);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, _mm256_loadu_pd(w + i)));
    }
    double tail = 0.0;
    for (; i < n; ++i)
    {
        tail += std::fabs(x[i] - y[i]) * w[i];
    }
    return hsum(acc) + tail;
}

double sum_avx2(const double* x, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    }
    double tail = 0.0;
    for (; i < n; ++i)
    {
        tail += x[i];
    }
    return hsum(acc) + tail;
}

}  // namespace

const Kernels avx2_kernels{Isa::avx2, axpy_avx2, dot_avx2, weighted_abs_diff_avx2, sum_avx2};

}  // namespace ergo::simd::detail
