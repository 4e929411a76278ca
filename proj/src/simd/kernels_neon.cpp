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

// AArch64 only. Separate multiply and add, no vfmaq, to keep axpy identical
// to the scalar reference.

#include <arm_neon.h>

#include <cmath>

#include "ergo/simd.hpp"

namespace ergo::simd::detail
{
namespace
{

void axpy_neon(double a, const double* x, double* y, std::size_t n)
{
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        float64x2_t vy = vld1q_f64(y + i);
        vy = vaddq_f64(vy, vmulq_f64(va, vld1q_f64(x + i)));
        vst1q_f64(y + i, vy);
    }
    for (; i < n; ++i)
    {
        y[i] += a * x[i];
    }
}

double dot_neon(const double* x, const double* y, std::size_t n)
{
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    }
    double tail = 0.0;
    for (; i < n; ++i)
    {
        tail += x[i] * y[i];
    }
    return (vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1)) + tail;
}

double weighted_abs_diff_neon(const double* x, const double* y, const double* w, std::size_t n)
{
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        const float64x2_t d = vabdq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
        acc = vaddq_f64(acc, vmulq_f64(d, vld1q_f64(w + i)));
    }
    double tail = 0.0;
    for (; i < n; ++i)
    {
        tail += std::fabs(x[i] - y[i]) * w[i];
    }
    return (vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1)) + tail;
}

double sum_neon(const double* x, std::size_t n)
{
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        acc = vaddq_f64(acc, vld1q_f64(x + i));
    }
    double tail = 0.0;
    for (; i < n; ++i)
    {
        tail += x[i];
    }
    return (vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1)) + tail;
}

}  // namespace

const Kernels neon_kernels{Isa::neon, axpy_neon, dot_neon, weighted_abs_diff_neon, sum_neon};

}  // namespace ergo::simd::detail
