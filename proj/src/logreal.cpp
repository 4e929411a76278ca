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

#include "ergo/logreal.hpp"

#include <algorithm>

#include "ergo/error.hpp"

namespace ergo
{
namespace logspace
{

double add(double a, double b)
{
    if (a < b)
    {
        std::swap(a, b);
    }
    if (b == neg_inf)
    {
        return a;
    }
    return a + std::log1p(std::exp(b - a));
}

double sub(double a, double b)
{
    require(a >= b, "log-space subtraction would go negative");
    if (b == neg_inf)
    {
        return a;
    }
    if (a == b)
    {
        return neg_inf;
    }
    return a + log1m_exp(b - a);
}

double log1p_exp(double x)
{
    if (x > 36.0)
    {
        return x + std::exp(-x);
    }
    return std::log1p(std::exp(x));
}

double log_expm1(double ln_x)
{
    const double x = std::exp(ln_x);
    if (ln_x < -20.0)
    {
        // e^x - 1 = x (1 + x/2 + ...)
        return ln_x + 0.5 * x;
    }
    if (x > 36.0)
    {
        return x + std::log1p(-std::exp(-x));
    }
    return std::log(std::expm1(x));
}

double log_log1p(double ln_y)
{
    if (ln_y < -20.0)
    {
        // ln(1 + y) = y (1 - y/2 + ...)
        return ln_y - 0.5 * std::exp(ln_y);
    }
    return std::log(log1p_exp(ln_y));
}

double log1m_exp(double ln_x)
{
    require(ln_x <= 0.0, "log1m_exp argument must be <= 0");
    if (ln_x > -0.693)
    {
        return std::log(-std::expm1(ln_x));
    }
    return std::log1p(-std::exp(ln_x));
}

double log_one_minus_exp_neg(double ln_x)
{
    if (ln_x < -30.0)
    {
        // 1 - e^{-x} >= x (1 - x/2)
        return ln_x + std::log1p(-0.5 * std::exp(ln_x));
    }
    const double x = std::exp(ln_x);
    return std::log(-std::expm1(-x));
}

}  // namespace logspace

LogReal LogReal::from_value(double v)
{
    require(v >= 0.0, "LogReal holds nonnegative values only");
    return from_log(std::log(v));
}

Rate Rate::from_value(double r)
{
    if (!(r > 1.0))
    {
        throw Error(ErrorCode::rate_range, "rate must exceed 1");
    }
    return from_log_kappa(std::log(std::log1p(r - 1.0)));
}

}  // namespace ergo
