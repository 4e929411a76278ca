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

// Monte Carlo cross-checks. Every replication owns a SplitMix64 stream keyed
// by (seed, replication index), and per-replication outcomes are reduced in
// index order, so summaries are bit-identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ergo/chain.hpp"
#include "ergo/renewal.hpp"

namespace ergo
{

struct SimulationConfig
{
    std::uint64_t seed = 0x5eed;
    std::size_t replications = 100000;
    std::size_t cap = 100000;
};

/// SplitMix64 with golden-ratio increment 0x9E3779B97F4A7C15 and finalizer
/// multipliers 0xBF58476D1CE4E5B9, 0x94D049BB133111EB (shifts 30, 27, 31).
class CounterRng
{
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Index drawn from a probability vector by inverse CDF.
    std::size_t categorical(std::span<const double> probs);

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t state_;
};

struct SampleSummary
{
    std::size_t replications = 0;
    std::size_t censored = 0;
    /// over uncensored samples
    double mean = 0.0;
    double variance = 0.0;
    double mean_std_error = 0.0;
    double mgf_rate = 1.0;
    double mgf = 1.0;
    double mgf_std_error = 0.0;
    /// counts[t] = number of uncensored samples equal to t, t = 0..max observed
    std::vector<std::size_t> counts;

    double censored_fraction() const
    {
        return replications ? static_cast<double>(censored) / replications : 0.0;
    }
    /// Empirical P{T = t} among all replications.
    double frequency(std::size_t t) const;
};

/// T_{0,n}: steps for the bivariate forward-recurrence chain to reach (1, 1)
/// from (1, n + 1); zero when n = 0. Throws EXCESS_CENSORING above 1%.
SampleSummary simulate_coupling_time(const IncrementDistribution& p, std::size_t delay,
                                     const SimulationConfig& cfg, double mgf_rate = 1.0);

/// tau_target from source. Throws EXCESS_CENSORING above 1%.
SampleSummary simulate_hitting(const FiniteChain& chain, std::size_t source,
                               const StateSet& target, const SimulationConfig& cfg,
                               double mgf_rate = 1.0);

struct Agreement
{
    double exact = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    /// |estimate - exact| / std_error; 0 when both coincide
    double z = 0.0;

    bool within(double k) const { return z <= k; }
};

Agreement compare(double exact, double estimate, double std_error);

/// Per-bucket comparison of an empirical law with exact P{T = t}, t = 1..horizon,
/// using the binomial standard error at the exact probability.
std::vector<Agreement> compare_law(const SampleSummary& s, std::span<const double> exact_probs);

}  // namespace ergo
