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
#include <numeric>
#include <vector>

#include "ergo/error.hpp"
#include "ergo/renewal.hpp"
#include "ergo/splitting.hpp"
#include "support/corpus.hpp"

namespace ergo
{
namespace
{

SplitChain example_split()
{
    const auto cc = testing::two_state_example();
    return split_chain(cc.chain, cc.minorization, cc.drift.weight);
}

TEST(Splitting, MinorizationCheck)
{
    for (const auto& cc : testing::chain_corpus())
    {
        EXPECT_TRUE(verify_minorization(cc.chain, cc.minorization).passed) << cc.name;
        auto inflated = cc.minorization;
        inflated.delta = std::min(1.0, inflated.delta * 1.5);
        if (inflated.delta > cc.minorization.delta)
        {
            EXPECT_FALSE(verify_minorization(cc.chain, inflated).passed) << cc.name;
        }
    }
    auto off = testing::two_state_example().minorization;
    off.mu = {0.5, 0.5};
    EXPECT_FALSE(verify_minorization(testing::two_state_example().chain, off).passed);
}

TEST(Splitting, SplitMeasureExamples)
{
    const MinorizationCertificate whole{StateSet(2, {0}), 1.0, {1.0, 0.0}};
    const std::vector<double> on_u{1.0, 0.0};
    const auto halves = split_measure(on_u, whole);
    EXPECT_DOUBLE_EQ(halves[0], 0.5);
    EXPECT_DOUBLE_EQ(halves[2], 0.5);

    const std::vector<double> off_u{0.0, 1.0};
    const auto kept = split_measure(off_u, whole);
    EXPECT_EQ(kept, (std::vector<double>{0.0, 1.0, 0.0, 0.0}));

    const auto example = split_measure(on_u, testing::two_state_example().minorization);
    EXPECT_NEAR(example[0], 0.95, 1e-15);
    EXPECT_NEAR(example[2], 0.05, 1e-15);
    EXPECT_EQ(collapse_levels(example), on_u);
}

TEST(Splitting, ExampleRows)
{
    const SplitChain s = example_split();
    ASSERT_EQ(s.chain.size(), 4u);
    // 1_0
    EXPECT_NEAR(s.chain(0, 0), 0.05, 1e-12);
    EXPECT_NEAR(s.chain(0, 2), 0.0026316, 1e-7);
    EXPECT_NEAR(s.chain(0, 2), 0.01 / 3.8, 1e-15);
    EXPECT_NEAR(s.chain(0, 1), 0.9473684, 1e-7);
    // 1_1 carries mu*
    EXPECT_NEAR(s.chain(2, 0), 0.95, 1e-15);
    EXPECT_NEAR(s.chain(2, 2), 0.05, 1e-15);
    EXPECT_NEAR(s.chain(2, 1), 0.0, 1e-15);
    // 2_0
    EXPECT_NEAR(s.chain(1, 0), 0.855, 1e-15);
    EXPECT_NEAR(s.chain(1, 2), 0.045, 1e-15);
    EXPECT_NEAR(s.chain(1, 1), 0.1, 1e-15);
    EXPECT_EQ(s.atom, StateSet(4, {2}));
    EXPECT_EQ(s.alpha(), 2u);
}

TEST(Splitting, AtomAccess)
{
    EXPECT_DOUBLE_EQ(atom_access_bound(1.0), 0.5);
    EXPECT_NEAR(atom_access_bound(0.1), 0.01 / 3.8, 1e-17);
    const auto check = check_atom_access(example_split());
    EXPECT_TRUE(check.passed);
    EXPECT_NEAR(check.min_access, 0.01 / 3.8, 1e-15);
    EXPECT_EQ(atom_increment(example_split(), 10).probs[0], 0.05);
}

TEST(Splitting, StructuralProperties)
{
    for (const auto& cc : testing::chain_corpus())
    {
        const SplitChain s = split_chain(cc.chain, cc.minorization, cc.drift.weight);
        const std::size_t n = cc.chain.size();
        const double delta = cc.minorization.delta;
        const auto mu_star = split_measure(cc.minorization.mu, cc.minorization);
        for (std::size_t x : s.atom.members())
        {
            for (std::size_t y = 0; y < 2 * n; ++y) EXPECT_NEAR(s.chain(x, y), mu_star[y], 1e-12);
        }
        for (std::size_t x = 0; x < n; ++x)
        {
            if (cc.minorization.small_set.contains(x)) continue;
            for (std::size_t from = 0; from < 2 * n; ++from)
            {
                EXPECT_EQ(s.chain(from, s.level1(x)), 0.0);
            }
            EXPECT_EQ(s.vhat(s.level0(x)), cc.drift.weight(x));
        }
        const auto access = check_atom_access(s);
        EXPECT_TRUE(access.passed) << cc.name;
        EXPECT_LT(access.level1_error, 1e-11);
        for (std::size_t x : cc.minorization.small_set.members())
        {
            double mass0 = 0.0;
            double mass1 = 0.0;
            for (std::size_t y : s.atom.members())
            {
                mass0 += s.chain(s.level0(x), y);
                mass1 += s.chain(s.level1(x), y);
            }
            EXPECT_NEAR(mass1, delta / 2.0, 1e-11);
            EXPECT_GE(mass0, atom_access_bound(delta) - 1e-11);
        }
        EXPECT_NEAR(atom_increment(s, 5).probs[0], delta / 2.0, 1e-12);
    }
}

TEST(Splitting, MarginalPropertyAndHittingLaws)
{
    std::mt19937_64 rng(21);
    for (const auto& cc : testing::chain_corpus())
    {
        const SplitChain s = split_chain(cc.chain, cc.minorization);
        const std::size_t n = cc.chain.size();
        std::vector<double> lambda = testing::random_probability(rng, n);
        std::vector<double> base = lambda;
        std::vector<double> split = split_measure(lambda, cc.minorization);
        for (std::size_t step = 1; step <= 50; ++step)
        {
            base = cc.chain.matrix().left_multiply(base);
            split = s.chain.matrix().left_multiply(split);
            const auto collapsed = collapse_levels(split);
            for (std::size_t y = 0; y < n; ++y) EXPECT_NEAR(collapsed[y], base[y], 1e-11) << cc.name;
        }
        // hitting laws of B and its lift agree from lambda and lambda*
        for (const StateSet& target : {cc.drift.set, cc.minorization.small_set})
        {
            const auto base_law = hitting_law_from(cc.chain, lambda, target, 50);
            const auto split_law =
                hitting_law_from(s.chain, split_measure(lambda, cc.minorization), s.lifted(target), 50);
            for (std::size_t k = 0; k < 50; ++k) EXPECT_NEAR(base_law[k], split_law[k], 1e-11);
        }
    }
}

TEST(Splitting, NegativeRowsAreRejected)
{
    // delta mu(0) / 2 exceeds P(0, 0)
    const FiniteChain chain(Matrix::from_rows({{0.3, 0.7}, {0.5, 0.5}}));
    const MinorizationCertificate bad{StateSet(2, {0}), 0.9, {1.0, 0.0}};
    try
    {
        split_chain(chain, bad);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::negative_row);
    }
}

TEST(Splitting, AtomIncrementSumsToOne)
{
    for (const auto& cc : testing::chain_corpus(10))
    {
        const SplitChain s = split_chain(cc.chain, cc.minorization);
        const auto inc = atom_increment(s, 400);
        const double total = std::accumulate(inc.probs.begin(), inc.probs.end(), 0.0) + inc.tail;
        EXPECT_NEAR(total, 1.0, 1e-12);
        // same law as the hitting law of the atom from alpha
        const auto law = hitting_law(s.chain, s.alpha(), s.atom, 400);
        for (std::size_t k = 0; k < 400; ++k) EXPECT_NEAR(inc.probs[k], law.probs[k], 1e-15);
    }
}

TEST(Splitting, AtomReturnSequenceIsARenewalSequence)
{
    for (const auto& cc : testing::chain_corpus(10))
    {
        const SplitChain s = split_chain(cc.chain, cc.minorization);
        const std::size_t horizon = 60;
        const std::vector<double> g(2 * cc.chain.size(), 1.0);
        const auto seq = regenerative_sequences(s, g, horizon);
        const auto inc = atom_increment(s, horizon);
        const auto u = renewal_sequence(inc.probs, horizon);
        for (std::size_t k = 0; k <= horizon; ++k) EXPECT_NEAR(seq.u[k], u(k), 1e-12) << cc.name;
        // u(n) = P^n(alpha, U_1)
        Matrix power = Matrix::identity(s.chain.size());
        for (std::size_t k = 1; k <= 20; ++k)
        {
            power = power * s.chain.matrix();
            double mass = 0.0;
            for (std::size_t y : s.atom.members()) mass += power(s.alpha(), y);
            EXPECT_NEAR(seq.u[k], mass, 1e-12);
        }
    }
}

TEST(Splitting, RegenerativeDecomposition)
{
    const SplitChain example = example_split();
    const auto trivial = regenerative_check(example, 1, StateSet(4, {1}));
    EXPECT_TRUE(trivial.passed);
    EXPECT_LT(trivial.residual, 1e-15);
    EXPECT_LT(regenerative_check(example, 5, StateSet(4, {1})).residual, 1e-12);

    for (const auto& cc : testing::chain_corpus())
    {
        const SplitChain s = split_chain(cc.chain, cc.minorization);
        for (std::size_t y = 0; y < s.chain.size(); ++y)
        {
            const auto check = regenerative_check(s, 20, StateSet(s.chain.size(), {y}));
            EXPECT_TRUE(check.passed) << cc.name << " target " << y << " residual " << check.residual;
        }
    }
}

TEST(Splitting, InvariantIdentities)
{
    const SplitChain example = example_split();
    const std::vector<double> ones(4, 1.0);
    const auto report = invariant_identities(example, ones);
    EXPECT_TRUE(report.passed);
    EXPECT_LT(report.kac_error, 1e-12);
    EXPECT_LT(report.series_gap, 1e-10);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (const auto& cc : testing::chain_corpus(12))
    {
        const SplitChain s = split_chain(cc.chain, cc.minorization, cc.drift.weight);
        std::vector<double> g(s.chain.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = unit(rng) * s.vhat(i);
        const auto r = invariant_identities(s, g);
        EXPECT_TRUE(r.passed) << cc.name << " kac " << r.kac_error << " gap " << r.series_gap;
        EXPECT_LT(r.marginal_vs_base, 1e-11);
        EXPECT_LT(r.marginal_error, 1e-12);
    }
}

TEST(Splitting, SplitDriftIsRecorded)
{
    const auto cc = testing::two_state_example();
    const SplitChain s = split_chain(cc.chain, cc.minorization, cc.drift.weight);
    const auto d = measure_split_drift(s, cc.drift.set, cc.drift.lambda, cc.drift.b);
    EXPECT_TRUE(d.base_constants_hold);
    for (const auto& c : testing::chain_corpus())
    {
        const SplitChain t = split_chain(c.chain, c.minorization, c.drift.weight);
        const auto m = measure_split_drift(t, c.drift.set, c.drift.lambda, c.drift.b);
        EXPECT_GE(m.b, 0.0);
        EXPECT_TRUE(std::isfinite(m.lambda));
    }
}

}  // namespace
}  // namespace ergo
