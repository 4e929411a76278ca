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

#include "corpus.hpp"

#include <algorithm>
#include <cmath>

namespace ergo::testing
{

std::vector<double> random_probability(std::mt19937_64& rng, std::size_t n, double floor)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> v(n);
    double total = 0.0;
    for (double& x : v)
    {
        x = floor + unit(rng);
        total += x;
    }
    for (double& x : v) x /= total;
    return v;
}

CertifiedChain random_certified_chain(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = 2 + rng() % 11;

    const std::size_t low = std::min<std::size_t>(n, 1 + rng() % 3);
    const std::vector<double> reset = random_probability(rng, low, 0.1);
    Matrix m(n, n);
    for (std::size_t x = 0; x < n; ++x)
    {
        const double w = 0.3 + 0.4 * unit(rng);
        const std::vector<double> row = random_probability(rng, n, 0.05);
        for (std::size_t y = 0; y < n; ++y)
        {
            m(x, y) = (1.0 - w) * row[y] + (y < low ? w * reset[y] : 0.0);
        }
    }
    FiniteChain chain(m);

    CertifiedChain out;
    out.name = "chain-" + std::to_string(seed) + "-n" + std::to_string(n);

    const double s = 1.1 + 0.9 * unit(rng);
    std::vector<double> v(n);
    for (std::size_t x = 0; x < n; ++x) v[x] = std::pow(s, static_cast<double>(x));
    const WeightFunction weight(v);
    const std::vector<double> pv = chain.matrix().apply(weight.values());
    double lo = 1e300;
    double hi = 0.0;
    for (std::size_t x = 0; x < n; ++x)
    {
        lo = std::min(lo, pv[x] / v[x]);
        hi = std::max(hi, pv[x] / v[x]);
    }
    const double lambda = std::clamp(lo + (hi - lo) * unit(rng), 0.05, 0.95);
    std::vector<std::size_t> c_members;
    double b = 0.0;
    for (std::size_t x = 0; x < n; ++x)
    {
        if (pv[x] > lambda * v[x])
        {
            c_members.push_back(x);
            b = std::max(b, pv[x] - lambda * v[x]);
        }
    }
    if (c_members.empty()) c_members.push_back(0);
    out.drift = {weight, lambda, b, StateSet(n, c_members)};

    const std::size_t k = 1 + rng() % std::max<std::size_t>(1, n / 2);
    std::vector<std::size_t> u_members;
    std::vector<double> nu(n, 0.0);
    double delta = 0.0;
    for (std::size_t y = 0; y < k; ++y)
    {
        u_members.push_back(y);
        double lowest = 1.0;
        for (std::size_t x = 0; x < k; ++x) lowest = std::min(lowest, m(x, y));
        nu[y] = lowest;
        delta += lowest;
    }
    for (double& x : nu) x /= delta;
    out.minorization = {StateSet(n, u_members), delta, nu};

    out.n0 = 1 + rng() % 3;
    out.c = verify_petiteness(chain, {out.drift.set, out.minorization.small_set, out.n0, 0.0}).infimum;
    out.chain = std::move(chain);
    return out;
}

std::vector<CertifiedChain> chain_corpus(std::size_t count)
{
    std::vector<CertifiedChain> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_certified_chain(1000 + 17 * i));
    return out;
}

CertifiedChain two_state_example()
{
    CertifiedChain out;
    out.name = "two-state";
    out.chain = FiniteChain(Matrix::from_rows({{0.1, 0.9}, {0.9, 0.1}}));
    out.minorization = {StateSet(2, {0}), 0.1, {1.0, 0.0}};
    out.drift = {WeightFunction::constant(2), 0.9, 0.2, StateSet::all(2)};
    out.n0 = 1;
    out.c = 0.1;
    return out;
}

std::vector<IncrementDistribution> increment_corpus()
{
    std::vector<IncrementDistribution> out{
        IncrementDistribution({0.5, 0.5}),
        IncrementDistribution({1.0}),
        IncrementDistribution({0.3, 0.2, 0.5}),
        IncrementDistribution({0.1, 0.9}),
        IncrementDistribution({0.25, 0.25, 0.25, 0.25}),
        IncrementDistribution({0.6, 0.0, 0.4}),
        IncrementDistribution({0.2, 0.3, 0.1, 0.1, 0.3}),
        IncrementDistribution({0.9, 0.05, 0.05}),
    };
    std::mt19937_64 rng(77);
    for (std::size_t i = 0; i < 4; ++i)
    {
        out.emplace_back(random_probability(rng, 2 + rng() % 6, 0.05));
    }
    return out;
}

double brute_force_renewal(const IncrementDistribution& p, std::size_t n)
{
    if (n == 0) return 1.0;
    const std::size_t patterns = std::size_t{1} << (n - 1);
    // extended precision keeps the oracle's own rounding below the recursion's
    long double total = 0.0L;
    for (std::size_t mask = 0; mask < patterns; ++mask)
    {
        long double weight = 1.0L;
        std::size_t last = 0;
        for (std::size_t t = 1; t <= n && weight > 0.0L; ++t)
        {
            const bool renewal = t == n || ((mask >> (t - 1)) & 1U);
            if (renewal)
            {
                weight *= p(t - last);
                last = t;
            }
        }
        total += weight;
    }
    return static_cast<double>(total);
}

}  // namespace ergo::testing
