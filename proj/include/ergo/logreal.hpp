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

// Positive magnitudes and geometric rates that stay representable when the
// certified constants run far outside double range. A LogReal keeps ln(x);
// a Rate r > 1 keeps ln(ln r), so rates 1 + 1e-400000 remain distinct from 1.

#include <cmath>
#include <compare>
#include <limits>

namespace ergo
{

namespace logspace
{

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// ln(e^a + e^b)
double add(double a, double b);

/// ln(e^a - e^b), requires a >= b.
double sub(double a, double b);

/// ln(1 + e^x)
double log1p_exp(double x);

/// ln(e^x - 1) for x = e^{ln_x} > 0.
double log_expm1(double ln_x);

/// ln(ln(1 + y)) for y = e^{ln_y} > 0.
double log_log1p(double ln_y);

/// ln(1 - x) for x = e^{ln_x} in [0, 1).
double log1m_exp(double ln_x);

/// Lower bound on ln(1 - e^{-x}) for x = e^{ln_x} > 0, accurate to rounding.
double log_one_minus_exp_neg(double ln_x);

}  // namespace logspace

class LogReal
{
public:
    LogReal() = default;

    static LogReal from_value(double v);
    static LogReal from_log(double log_value)
    {
        LogReal out;
        out.log_ = log_value;
        return out;
    }
    static LogReal one() { return from_log(0.0); }

    double log() const { return log_; }
    double value() const { return std::exp(log_); }
    bool is_zero() const { return log_ == logspace::neg_inf; }
    bool is_finite() const { return std::isfinite(log_); }

    /// this - other, requires this >= other.
    LogReal minus(LogReal other) const
    {
        return from_log(logspace::sub(log_, other.log_));
    }

    /// 1 + this
    LogReal one_plus() const { return from_log(logspace::log1p_exp(log_)); }

    LogReal pow(double exponent) const { return from_log(log_ * exponent); }

    friend LogReal operator*(LogReal a, LogReal b) { return from_log(a.log_ + b.log_); }
    friend LogReal operator/(LogReal a, LogReal b) { return from_log(a.log_ - b.log_); }
    friend LogReal operator+(LogReal a, LogReal b)
    {
        return from_log(logspace::add(a.log_, b.log_));
    }
    friend auto operator<=>(LogReal a, LogReal b) { return a.log_ <=> b.log_; }
    friend bool operator==(LogReal a, LogReal b) { return a.log_ == b.log_; }

private:
    double log_ = logspace::neg_inf;
};

/// A geometric rate r > 1.
class Rate
{
public:
    Rate() = default;

    static Rate from_value(double r);
    static Rate from_log_kappa(double log_kappa)
    {
        Rate out;
        out.log_kappa_ = log_kappa;
        return out;
    }
    /// r = 1 + e^{ln_excess}
    static Rate from_log_excess(double ln_excess)
    {
        return from_log_kappa(logspace::log_log1p(ln_excess));
    }

    double log_kappa() const { return log_kappa_; }
    /// ln r
    double kappa() const { return std::exp(log_kappa_); }
    /// r itself; rounds to 1 once ln r drops below double epsilon.
    double value() const { return std::exp(kappa()); }
    /// ln(r - 1)
    double log_excess() const { return logspace::log_expm1(log_kappa_); }
    LogReal excess() const { return LogReal::from_log(log_excess()); }
    LogReal as_logreal() const { return LogReal::from_log(kappa()); }
    /// r^n
    LogReal pow(double n) const { return LogReal::from_log(n * kappa()); }

    /// 1 + fraction * (r - 1)
    Rate scale_excess(double fraction) const
    {
        return from_log_excess(log_excess() + std::log(fraction));
    }
    /// Midpoint of the open interval (1, r).
    Rate midpoint() const { return scale_excess(0.5); }

    friend auto operator<=>(Rate a, Rate b) { return a.log_kappa_ <=> b.log_kappa_; }
    friend bool operator==(Rate a, Rate b) { return a.log_kappa_ == b.log_kappa_; }

private:
    double log_kappa_ = logspace::neg_inf;
};

}  // namespace ergo
