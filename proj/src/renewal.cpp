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

#include "ergo/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergo/chain.hpp"
#include "ergo/error.hpp"
#include "ergo/kendall.hpp"

namespace ergo
{

namespace
{

void check_probability_vector(std::span<const double> probs, const char* what)
{
    if (probs.empty())
    {
        throw Error(ErrorCode::validation_error, std::string(what) + " is empty");
    }
    double total = 0.0;
    for (double v : probs)
    {
        if (!(v >= 0.0) || !std::isfinite(v))
        {
            throw Error(ErrorCode::validation_error,
                        std::string(what) + " has a negative or non-finite entry");
        }
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12)
    {
        throw Error(ErrorCode::validation_error,
                    std::string(what) + " sums to " + std::to_string(total) + ", not 1");
    }
}

}  // namespace

IncrementDistribution::IncrementDistribution(std::vector<double> probs) : probs_(std::move(probs))
{
    check_probability_vector(probs_, "increment distribution");
    // Trailing zeros would only inflate the bivariate state space.
    while (probs_.size() > 1 && probs_.back() == 0.0)
    {
        probs_.pop_back();
    }
}

double IncrementDistribution::mean() const
{
    double m = 0.0;
    for (std::size_t n = 1; n <= probs_.size(); ++n)
    {
        m += static_cast<double>(n) * probs_[n - 1];
    }
    return m;
}

DelayDistribution::DelayDistribution(std::vector<double> probs) : probs_(std::move(probs))
{
    check_probability_vector(probs_, "delay distribution");
}

RenewalSequence renewal_sequence(std::span<const double> increments, std::size_t horizon)
{
    RenewalSequence u;
    u.values.assign(horizon + 1, 0.0);
    u.values[0] = 1.0;
    for (std::size_t n = 1; n <= horizon; ++n)
    {
        double acc = 0.0;
        const std::size_t top = std::min(n, increments.size());
        for (std::size_t k = 1; k <= top; ++k)
        {
            acc += increments[k - 1] * u.values[n - k];
        }
        u.values[n] = acc;
    }
    return u;
}

RenewalSequence renewal_sequence(const IncrementDistribution& p, std::size_t horizon)
{
    return renewal_sequence(p.probs(), horizon);
}

StationaryDelay stationary_delay(const IncrementDistribution& p)
{
    const double m = p.mean();
    std::vector<double> e(p.support());
    for (std::size_t n = 0; n < p.support(); ++n)
    {
        // Tail sum directly; 1 - cumulative loses digits for long supports.
        double tail = 0.0;
        for (std::size_t j = n + 1; j <= p.support(); ++j)
        {
            tail += p(j);
        }
        e[n] = tail / m;
    }
    // Normalisation of e holds to rounding; renormalise so DelayDistribution
    // accepts it at 1e-12.
    double total = 0.0;
    for (double v : e)
    {
        total += v;
    }
    for (double& v : e)
    {
        v /= total;
    }
    return StationaryDelay{DelayDistribution(std::move(e)), 1.0 / m};
}

double increment_mgf(const IncrementDistribution& p, double r)
{
    require(r >= 1.0, "increment_mgf needs r >= 1");
    double acc = 0.0;
    double power = 1.0;
    for (std::size_t n = 1; n <= p.support(); ++n)
    {
        power *= r;
        acc += p(n) * power;
    }
    return acc;
}

Matrix forward_recurrence_kernel(const IncrementDistribution& p)
{
    const std::size_t L = p.support();
    Matrix k(L, L);
    for (std::size_t m = 1; m <= L; ++m)
    {
        k(0, m - 1) = p(m);
    }
    for (std::size_t n = 2; n <= L; ++n)
    {
        k(n - 1, n - 2) = 1.0;
    }
    return k;
}

CouplingTailReport coupling_tail_check(const IncrementDistribution& p, std::size_t horizon,
                                       double r2)
{
    require(p(1) > 0.0, "coupling check needs p(1) > 0");
    require(r2 > 1.0, "coupling check needs r2 > 1");
    const auto u = renewal_sequence(p, horizon);
    const auto [delay, pi1] = stationary_delay(p);
    const auto biv = bivariate_chain(p);
    const StateSet meet(biv.chain.size(), {biv.index(1, 1)});

    // Joint start: zero-delay process at (1, .), stationary delay m puts the
    // second coordinate at m + 1. Delay 0 is coupled at time 0 and drops out.
    std::vector<double> alive(biv.chain.size(), 0.0);
    for (std::size_t m = 1; m < delay.size(); ++m)
    {
        alive[biv.index(1, m + 1)] += delay(m);
    }

    CouplingTailReport report;
    report.deviation.resize(horizon + 1);
    report.coupling_tail.resize(horizon + 1);
    report.worst_margin = std::numeric_limits<double>::infinity();
    double power = 1.0;
    for (std::size_t n = 0; n <= horizon; ++n)
    {
        if (n > 0)
        {
            alive = taboo_step(biv.chain, meet, alive);
            // Mass that just met is no longer "T > n".
            alive[biv.index(1, 1)] = 0.0;
        }
        double tail = 0.0;
        for (double v : alive)
        {
            tail += v;
        }
        report.coupling_tail[n] = tail;
        report.deviation[n] = std::fabs(u(n) - pi1);
        if (n > 0)
        {
            power *= r2;
            report.weighted_partial_sum += report.deviation[n] * power;
        }
        const double margin = tail - report.deviation[n];
        if (margin < report.worst_margin)
        {
            report.worst_margin = margin;
            report.worst_n = n;
        }
        if (margin < -1e-12)
        {
            report.holds = false;
        }
    }
    return report;
}

}  // namespace ergo
