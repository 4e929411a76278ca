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

#include <cmath>

#include "ergo/simd.hpp"

namespace ergo::simd::detail
{
namespace
{

void axpy_scalar(double a, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
    {
        y[i] += a * x[i];
    }
}

double dot_scalar(const double* x, const double* y, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        acc += x[i] * y[i];
    }
    return acc;
}

double weighted_abs_diff_scalar(const double* x, const double* y, const double* w,
                                std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        acc += std::fabs(x[i] - y[i]) * w[i];
    }
    return acc;
}

double sum_scalar(const double* x, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        acc += x[i];
    }
    return acc;
}

}  // namespace

const Kernels scalar_kernels{Isa::scalar, axpy_scalar, dot_scalar, weighted_abs_diff_scalar,
                             sum_scalar};

}  // namespace ergo::simd::detail
