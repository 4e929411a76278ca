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

#include "ergo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergo/error.hpp"
#include "ergo/parallel.hpp"

namespace ergo
{

namespace
{

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::int64_t kCensored = -1;
constexpr double kMaxCensoring = 0.01;

void validate(const SimulationConfig& cfg)
{
    require(cfg.replications >= 1, "montecarlo: replications must be >= 1");
    require(cfg.cap >= 1, "montecarlo: cap must be >= 1");
}

template <typename Sampler>
std::vector<std::int64_t> run_replications(const SimulationConfig& cfg, Sampler&& sample)
{
    std::vector<std::int64_t> out(cfg.replications, kCensored);
    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = (cfg.replications + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t end = std::min(cfg.replications, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i)
        {
            CounterRng rng(cfg.seed, i);
            out[i] = sample(rng);
        }
    });
    return out;
}

SampleSummary summarize(const std::vector<std::int64_t>& samples, double mgf_rate)
{
    SampleSummary s;
    s.replications = samples.size();
    s.mgf_rate = mgf_rate;
    double sum = 0.0;
    double sum_sq = 0.0;
    double mgf_sum = 0.0;
    double mgf_sq = 0.0;
    std::size_t kept = 0;
    for (std::int64_t t : samples)
    {
        if (t == kCensored)
        {
            ++s.censored;
            continue;
        }
        const auto tt = static_cast<std::size_t>(t);
        if (tt >= s.counts.size()) s.counts.resize(tt + 1, 0);
        ++s.counts[tt];
        const double x = static_cast<double>(t);
        const double w = std::pow(mgf_rate, x);
        sum += x;
        sum_sq += x * x;
        mgf_sum += w;
        mgf_sq += w * w;
        ++kept;
    }
    if (kept > 0)
    {
        const double k = static_cast<double>(kept);
        s.mean = sum / k;
        s.mgf = mgf_sum / k;
        if (kept > 1)
        {
            s.variance = std::max(0.0, (sum_sq - k * s.mean * s.mean) / (k - 1.0));
            const double mgf_var = std::max(0.0, (mgf_sq - k * s.mgf * s.mgf) / (k - 1.0));
            s.mean_std_error = std::sqrt(s.variance / k);
            s.mgf_std_error = std::sqrt(mgf_var / k);
        }
    }
    if (s.censored_fraction() > kMaxCensoring)
    {
        throw Error(ErrorCode::excess_censoring,
                    "montecarlo: " + std::to_string(s.censored) + " of " +
                        std::to_string(s.replications) + " paths reached the cap");
    }
    return s;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed ^ mix(stream + kGolden)))
{
}

std::uint64_t CounterRng::mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterRng::next()
{
    state_ += kGolden;
    return mix(state_);
}

double CounterRng::uniform()
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t CounterRng::categorical(std::span<const double> probs)
{
    const double u = uniform();
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probs.size(); ++i)
    {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last = i;
        if (u < acc) return i;
    }
    return last;
}

double SampleSummary::frequency(std::size_t t) const
{
    if (replications == 0 || t >= counts.size()) return 0.0;
    return static_cast<double>(counts[t]) / static_cast<double>(replications);
}

SampleSummary simulate_coupling_time(const IncrementDistribution& p, std::size_t delay,
                                     const SimulationConfig& cfg, double mgf_rate)
{
    validate(cfg);
    require(p(1) > 0.0, "montecarlo: p(1) must be positive");
    const auto probs = p.probs();
    auto sample = [&](CounterRng& rng) -> std::int64_t {
        if (delay == 0) return 0;
        std::size_t a = 1;
        std::size_t b = delay + 1;
        for (std::size_t t = 1; t <= cfg.cap; ++t)
        {
            const std::size_t na = a == 1 ? rng.categorical(probs) + 1 : a - 1;
            const std::size_t nb = b == 1 ? rng.categorical(probs) + 1 : b - 1;
            a = na;
            b = nb;
            if (a == 1 && b == 1) return static_cast<std::int64_t>(t);
        }
        return kCensored;
    };
    return summarize(run_replications(cfg, sample), mgf_rate);
}

SampleSummary simulate_hitting(const FiniteChain& chain, std::size_t source,
                               const StateSet& target, const SimulationConfig& cfg,
                               double mgf_rate)
{
    validate(cfg);
    require(source < chain.size(), "montecarlo: source out of range");
    require(target.universe() == chain.size(), "montecarlo: target universe mismatch");
    auto sample = [&](CounterRng& rng) -> std::int64_t {
        std::size_t x = source;
        for (std::size_t t = 1; t <= cfg.cap; ++t)
        {
            x = rng.categorical(chain.row(x));
            if (target.contains(x)) return static_cast<std::int64_t>(t);
        }
        return kCensored;
    };
    return summarize(run_replications(cfg, sample), mgf_rate);
}

Agreement compare(double exact, double estimate, double std_error)
{
    Agreement a{exact, estimate, std_error, 0.0};
    const double gap = std::abs(estimate - exact);
    if (gap > 0.0)
    {
        a.z = std_error > 0.0 ? gap / std_error : std::numeric_limits<double>::infinity();
    }
    return a;
}

std::vector<Agreement> compare_law(const SampleSummary& s, std::span<const double> exact_probs)
{
    std::vector<Agreement> out;
    const double n = static_cast<double>(s.replications);
    for (std::size_t t = 1; t <= exact_probs.size(); ++t)
    {
        const double p = exact_probs[t - 1];
        out.push_back(compare(p, s.frequency(t), std::sqrt(std::max(p * (1.0 - p), 0.0) / n)));
    }
    return out;
}

}  // namespace ergo
