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

// Discrete renewal theory on finite-support increment laws.

#include <cstddef>
#include <span>
#include <vector>

#include "ergo/matrix.hpp"

namespace ergo
{

/// p(n) for n = 1..L.
class IncrementDistribution
{
public:
    IncrementDistribution() = default;
    explicit IncrementDistribution(std::vector<double> probs);

    std::size_t support() const { return probs_.size(); }
    /// p(n); zero outside 1..L.
    double operator()(std::size_t n) const
    {
        return (n >= 1 && n <= probs_.size()) ? probs_[n - 1] : 0.0;
    }
    std::span<const double> probs() const { return probs_; }
    double mean() const;

private:
    std::vector<double> probs_;
};

/// d(n) for n = 0..K.
class DelayDistribution
{
public:
    DelayDistribution() = default;
    explicit DelayDistribution(std::vector<double> probs);

    std::size_t size() const { return probs_.size(); }
    double operator()(std::size_t n) const { return n < probs_.size() ? probs_[n] : 0.0; }
    std::span<const double> probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

struct RenewalSequence
{
    /// values[n] = u(n), n = 0..N
    std::vector<double> values;

    double operator()(std::size_t n) const { return values.at(n); }
    std::size_t horizon() const { return values.empty() ? 0 : values.size() - 1; }
};

RenewalSequence renewal_sequence(const IncrementDistribution& p, std::size_t horizon);

/// Same recursion over a raw (possibly truncated) increment vector, where
/// increments[k - 1] = p(k).
RenewalSequence renewal_sequence(std::span<const double> increments, std::size_t horizon);

struct StationaryDelay
{
    DelayDistribution delay;
    double pi1 = 0.0;
};

/// e(n) = (1 - sum_{j<=n} p(j)) / m and pi(1) = 1/m.
StationaryDelay stationary_delay(const IncrementDistribution& p);

/// sum_n p(n) r^n
double increment_mgf(const IncrementDistribution& p, double r);

/// Forward recurrence time chain on {1..L}: n -> n-1 for n > 1, 1 -> m w.p. p(m).
Matrix forward_recurrence_kernel(const IncrementDistribution& p);

struct CouplingTailReport
{
    /// |u(n) - pi(1)|, n = 0..N
    std::vector<double> deviation;
    /// P{T_{0,e} > n}, n = 0..N
    std::vector<double> coupling_tail;
    /// sum_{n=1}^{N} |u(n) - pi(1)| r2^n
    double weighted_partial_sum = 0.0;
    bool holds = true;
    std::size_t worst_n = 0;
    /// min over n of coupling_tail - deviation
    double worst_margin = 0.0;
};

/// Exact pointwise check of |u(n) - pi(1)| <= P{T_{0,e} > n} for n <= N,
/// where T_{0,e} is read off the bivariate forward-recurrence chain.
CouplingTailReport coupling_tail_check(const IncrementDistribution& p, std::size_t horizon,
                                       double r2);

}  // namespace ergo
