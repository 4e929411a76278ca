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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "ergo/chain.hpp"
#include "ergo/error.hpp"
#include "support/corpus.hpp"

namespace ergo
{
namespace
{

FiniteChain two_state() { return FiniteChain(Matrix::from_rows({{0.1, 0.9}, {0.9, 0.1}})); }

// P_x{tau_A = n} by summing over every path of length n.
double path_sum_hitting(const FiniteChain& chain, std::size_t x, const StateSet& target,
                        std::size_t n)
{
    double total = 0.0;
    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t at,
                                                                      std::size_t step, double p) {
        for (std::size_t y = 0; y < chain.size(); ++y)
        {
            const double q = p * chain(at, y);
            if (q == 0.0) continue;
            if (step == n)
            {
                if (target.contains(y)) total += q;
            }
            else if (!target.contains(y))
            {
                walk(y, step + 1, q);
            }
        }
    };
    walk(x, 1, 1.0);
    return total;
}

TEST(FiniteChain, RejectsInvalidMatrices)
{
    try
    {
        FiniteChain bad(Matrix::from_rows({{0.5, 0.49}, {0.5, 0.5}}));
        FAIL() << "accepted a row summing to 0.99";
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::validation_error);
        EXPECT_NE(std::string(e.what()).find("row 0"), std::string::npos);
    }
    EXPECT_THROW(FiniteChain(Matrix::from_rows({{1.2, -0.2}, {0.5, 0.5}})), Error);
    EXPECT_THROW(FiniteChain(Matrix(2, 3, 0.5)), Error);
}

TEST(FiniteChain, StateSetComplement)
{
    const StateSet a(5, {0, 3});
    const StateSet c = a.complement();
    EXPECT_EQ(c.size(), 3u);
    EXPECT_FALSE(c.contains(0));
    EXPECT_TRUE(c.contains(4));
    EXPECT_EQ(c.complement(), a);
}

TEST(FiniteChain, NStepMatchesRepeatedProduct)
{
    for (const auto& cc : testing::chain_corpus(8))
    {
        Matrix power = Matrix::identity(cc.chain.size());
        for (std::size_t n = 1; n <= 12; ++n)
        {
            power = power * cc.chain.matrix();
            EXPECT_LT(n_step(cc.chain, n).max_abs_diff(power), 1e-13) << cc.name << " n=" << n;
        }
    }
    EXPECT_EQ(n_step(two_state(), 0), Matrix::identity(2));
}

TEST(FiniteChain, TwoStateClosedForm)
{
    // P^n(0, 0) = 1/2 + (-0.8)^n / 2
    for (std::size_t n = 1; n <= 40; ++n)
    {
        EXPECT_NEAR(n_step(two_state(), n)(0, 0), 0.5 + 0.5 * std::pow(-0.8, n), 1e-14);
    }
    const auto pi = stationary(two_state());
    EXPECT_NEAR(pi[0], 0.5, 1e-14);
    EXPECT_NEAR(pi[1], 0.5, 1e-14);
}

TEST(FiniteChain, StationaryIsFixedAndNormalized)
{
    for (const auto& cc : testing::chain_corpus())
    {
        const auto pi = stationary(cc.chain);
        EXPECT_NEAR(std::accumulate(pi.begin(), pi.end(), 0.0), 1.0, 1e-12);
        const auto moved = cc.chain.matrix().left_multiply(pi);
        for (std::size_t i = 0; i < pi.size(); ++i)
        {
            EXPECT_GE(pi[i], 0.0);
            EXPECT_NEAR(moved[i], pi[i], 1e-12) << cc.name;
        }
    }
}

TEST(FiniteChain, StationaryRejectsReducibleChains)
{
    const FiniteChain split(Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}}));
    try
    {
        stationary(split);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::non_unique);
    }
}

TEST(FiniteChain, HittingLawMatchesPathEnumeration)
{
    for (const auto& cc : testing::chain_corpus(10))
    {
        if (cc.chain.size() > 5) continue;
        const StateSet target(cc.chain.size(), {0});
        for (std::size_t x = 0; x < cc.chain.size(); ++x)
        {
            const auto law = hitting_law(cc.chain, x, target, 6);
            for (std::size_t n = 1; n <= 6; ++n)
            {
                EXPECT_NEAR(law.at(n), path_sum_hitting(cc.chain, x, target, n), 1e-14)
                    << cc.name << " x=" << x << " n=" << n;
            }
        }
    }
}

TEST(FiniteChain, HittingTailAndFromInitial)
{
    for (const auto& cc : testing::chain_corpus(6))
    {
        const StateSet target = cc.minorization.small_set;
        const std::size_t x = cc.chain.size() - 1;
        const auto law = hitting_law(cc.chain, x, target, 30);
        double cum = 0.0;
        for (std::size_t n = 1; n <= 30; ++n)
        {
            cum += law.at(n);
            EXPECT_NEAR(hitting_tail(cc.chain, x, target, n), 1.0 - cum, 1e-12);
        }
        std::vector<double> point(cc.chain.size(), 0.0);
        point[x] = 1.0;
        const auto from = hitting_law_from(cc.chain, point, target, 30);
        for (std::size_t n = 1; n <= 30; ++n) EXPECT_NEAR(from[n - 1], law.at(n), 1e-15);
    }
}

TEST(FiniteChain, TabooStepAgreesWithTabooKernel)
{
    const auto cc = testing::random_certified_chain(42);
    const StateSet taboo = cc.minorization.small_set;
    const std::size_t n = cc.chain.size();
    std::vector<double> mu(n, 0.0);
    mu[n - 1] = 1.0;
    mu = cc.chain.matrix().left_multiply(mu);
    for (std::size_t k = 1; k <= 10; ++k)
    {
        const Matrix kernel = taboo_kernel(cc.chain, taboo, k);
        for (std::size_t y = 0; y < n; ++y) EXPECT_NEAR(mu[y], kernel(n - 1, y), 1e-14);
        mu = taboo_step(cc.chain, taboo, mu);
    }
}

TEST(FiniteChain, MgfMatchesTruncatedSeries)
{
    for (const auto& cc : testing::chain_corpus(10))
    {
        const StateSet target = cc.minorization.small_set;
        const std::size_t n = cc.chain.size();
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * static_cast<double>(i);
        const WeightFunction weight(v);
        const double r = 1.05;
        const auto sums = mgf_weighted_sums(cc.chain, weight, target, r);
        const auto mgf = hitting_mgf(cc.chain, target, r);
        const auto mean = expected_hitting_time(cc.chain, target);
        for (std::size_t x = 0; x < n; ++x)
        {
            // k = 0 term, then the chain stays off the target through step k
            double series = v[x];
            double gf = 0.0;
            double et = 0.0;
            const auto law = hitting_law(cc.chain, x, target, 3000);
            std::vector<double> mu(n, 0.0);
            mu[x] = 1.0;
            mu = cc.chain.matrix().left_multiply(mu);
            for (std::size_t k = 1; k < 3000; ++k)
            {
                double term = 0.0;
                for (std::size_t y = 0; y < n; ++y)
                {
                    if (!target.contains(y)) term += mu[y] * v[y];
                }
                series += term * std::pow(r, static_cast<double>(k));
                mu = taboo_step(cc.chain, target, mu);
            }
            for (std::size_t k = 1; k <= 3000; ++k)
            {
                gf += law.at(k) * std::pow(r, static_cast<double>(k));
                et += law.at(k) * static_cast<double>(k);
            }
            EXPECT_NEAR(sums[x], series, 1e-9 * series) << cc.name << " x=" << x;
            EXPECT_NEAR(mgf_weighted_sum(cc.chain, weight, x, target, r), sums[x], 1e-10 * sums[x]);
            EXPECT_NEAR(mgf[x], gf, 1e-9 * gf);
            EXPECT_NEAR(mean[x], et, 1e-9 * et);
        }
    }
}

TEST(FiniteChain, MgfDivergesPastTheRadius)
{
    // from 1 the chain stays put with probability 0.9, so r = 1/0.9 diverges
    const FiniteChain chain(Matrix::from_rows({{0.5, 0.5}, {0.1, 0.9}}));
    const StateSet target(2, {0});
    EXPECT_NO_THROW(mgf_weighted_sum(chain, WeightFunction::constant(2), 1, target, 1.1));
    try
    {
        mgf_weighted_sum(chain, WeightFunction::constant(2), 1, target, 1.0 / 0.9);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::divergent);
    }
    // E_1[r^tau] = 0.1 r / (1 - 0.9 r)
    EXPECT_NEAR(hitting_mgf(chain, target, 1.05)[1], 0.105 / (1.0 - 0.945), 1e-12);
}

TEST(FiniteChain, VNormDistance)
{
    const auto pi = stationary(two_state());
    const auto weight = WeightFunction({1.0, 3.0});
    const auto d = vnorm_distances(two_state(), weight, 0, 20, pi);
    for (std::size_t n = 1; n <= 20; ++n)
    {
        // |P^n(0,.) - pi| = 0.5 * 0.8^n on each coordinate
        EXPECT_NEAR(d[n - 1], 2.0 * std::pow(0.8, n), 1e-13);
        EXPECT_NEAR(vnorm_distance(two_state(), weight, 0, n, pi), d[n - 1], 1e-15);
    }
}

TEST(FiniteChain, HandComputedExamples)
{
    const auto p2 = n_step(two_state(), 2);
    EXPECT_NEAR(p2(0, 0), 0.82, 1e-15);
    EXPECT_NEAR(p2(0, 1), 0.18, 1e-15);
    EXPECT_EQ(n_step(FiniteChain(Matrix::identity(3)), 5), Matrix::identity(3));

    const auto pi = stationary(FiniteChain(Matrix::from_rows({{0.1, 0.9}, {0.3, 0.7}})));
    EXPECT_NEAR(pi[0], 0.25, 1e-14);
    EXPECT_NEAR(pi[1], 0.75, 1e-14);

    EXPECT_EQ(taboo_kernel(two_state(), StateSet(2, {0}), 1), two_state().matrix());
    EXPECT_NEAR(taboo_kernel(two_state(), StateSet(2, {0}), 2)(1, 1), 0.01, 1e-15);
    const Matrix none = taboo_kernel(two_state(), StateSet::all(2), 2);
    EXPECT_EQ(none, Matrix(2, 2, 0.0));

    const FiniteChain coin(Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}));
    const auto law = hitting_law(coin, 0, StateSet(2, {0}), 10);
    EXPECT_DOUBLE_EQ(law.at(1), 0.5);
    EXPECT_DOUBLE_EQ(law.at(2), 0.25);
    // E[1.5^tau] = 3, so the sum is (3 - 1) / 0.5
    EXPECT_NEAR(mgf_weighted_sum(coin, WeightFunction::constant(2), 0, StateSet(2, {0}), 1.5), 4.0,
                1e-12);
    EXPECT_NEAR(
        mgf_weighted_sum(FiniteChain(Matrix::identity(2)), WeightFunction::constant(2), 0,
                         StateSet(2, {0}), 2.0),
        1.0, 1e-15);

    const std::vector<double> half{0.5, 0.5};
    EXPECT_NEAR(vnorm_distance(two_state(), WeightFunction::constant(2), 0, 1, half), 0.8, 1e-15);
    EXPECT_NEAR(vnorm_distance(two_state(), WeightFunction::constant(2), 0, 3, half), 0.512, 1e-15);
    EXPECT_NEAR(vnorm_distance(coin, WeightFunction::constant(2), 0, 4, half), 0.0, 1e-15);
}

TEST(FiniteChain, ChapmanKolmogorov)
{
    for (const auto& cc : testing::chain_corpus())
    {
        for (std::size_t n = 0; n <= 6; ++n)
        {
            for (std::size_t m = 0; m <= 6; ++m)
            {
                EXPECT_LT(n_step(cc.chain, n + m).max_abs_diff(n_step(cc.chain, n) * n_step(cc.chain, m)),
                          1e-10);
            }
        }
    }
}

TEST(FiniteChain, HittingMassConservedAndTabooRowsShrink)
{
    for (const auto& cc : testing::chain_corpus())
    {
        const StateSet target = cc.minorization.small_set;
        const std::size_t horizon = 40;
        const Matrix tail_kernel = taboo_kernel(cc.chain, target, horizon);
        Matrix previous = taboo_kernel(cc.chain, target, 1);
        for (std::size_t x = 0; x < cc.chain.size(); ++x)
        {
            const auto law = hitting_law(cc.chain, x, target, horizon);
            double hit = 0.0;
            for (double q : law.probs) hit += q;
            // P{tau > N} = sum over y outside A of P{X_N = y, tau >= N}
            double tail = 0.0;
            for (std::size_t y = 0; y < cc.chain.size(); ++y)
            {
                if (!target.contains(y)) tail += tail_kernel(x, y);
            }
            EXPECT_NEAR(hit + tail, 1.0, 1e-10) << cc.name;
        }
        for (std::size_t n = 2; n <= 10; ++n)
        {
            const Matrix next = taboo_kernel(cc.chain, target, n);
            for (std::size_t x = 0; x < cc.chain.size(); ++x)
            {
                double a = 0.0;
                double b = 0.0;
                for (std::size_t y = 0; y < cc.chain.size(); ++y)
                {
                    a += previous(x, y);
                    b += next(x, y);
                }
                EXPECT_LE(b, a + 1e-14);
            }
            previous = next;
        }
    }
}

TEST(FiniteChain, SandwichAroundWeightedSum)
{
    // (E[r^tau] - 1)/(r - 1) <= E[sum V r^k] <= (1 + r b)/(1 - lambda r) V(x), V >= 1
    for (const auto& cc : testing::chain_corpus())
    {
        const auto& d = cc.drift;
        for (double t : {0.1, 0.5, 0.9})
        {
            const double r = 1.0 + t * (1.0 / d.lambda - 1.0);
            const auto sums = mgf_weighted_sums(cc.chain, d.weight, d.set, r);
            const auto mgf = hitting_mgf(cc.chain, d.set, r);
            for (std::size_t x = 0; x < cc.chain.size(); ++x)
            {
                EXPECT_LE((mgf[x] - 1.0) / (r - 1.0), sums[x] * (1.0 + 1e-12)) << cc.name;
                EXPECT_LE(sums[x], (1.0 + r * d.b) / (1.0 - d.lambda * r) * d.weight(x) * (1.0 + 1e-12))
                    << cc.name << " x=" << x << " r=" << r;
            }
        }
    }
}

TEST(FiniteChain, VNormMonotoneInWeight)
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> bump(0.0, 2.0);
    for (const auto& cc : testing::chain_corpus(10))
    {
        const auto pi = stationary(cc.chain);
        const std::size_t n = cc.chain.size();
        std::vector<double> lo(n);
        std::vector<double> hi(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            lo[i] = 1.0 + bump(rng);
            hi[i] = lo[i] + bump(rng);
        }
        for (std::size_t step = 1; step <= 10; ++step)
        {
            EXPECT_LE(vnorm_distance(cc.chain, WeightFunction(lo), 0, step, pi),
                      vnorm_distance(cc.chain, WeightFunction(hi), 0, step, pi) + 1e-15);
        }
    }
}

}  // namespace
}  // namespace ergo
