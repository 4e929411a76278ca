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

#include <algorithm>
#include <cmath>
#include <vector>

#include "ergo/drift.hpp"
#include "ergo/error.hpp"
#include "support/corpus.hpp"

namespace ergo
{
namespace
{

FiniteChain two_state() { return FiniteChain(Matrix::from_rows({{0.1, 0.9}, {0.9, 0.1}})); }

ErrorCode code_of(auto&& f)
{
    try
    {
        f();
    }
    catch (const Error& e)
    {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::invalid_argument;
}

// Tail bound measured exactly on the chain: M0 = sup_C of the weighted
// return sum, A = sup_x of the weighted return sum over V(x).
GeometricTailBound measured_tail(const testing::CertifiedChain& cc, double r1)
{
    const auto& d = cc.drift;
    const auto sums = mgf_weighted_sums(cc.chain, d.weight, d.set, r1);
    double m0 = 1.0;
    double a = 1.0;
    for (std::size_t x = 0; x < cc.chain.size(); ++x)
    {
        if (d.set.contains(x)) m0 = std::max(m0, sums[x]);
        a = std::max(a, sums[x] / d.weight(x));
    }
    return {Rate::from_value(r1), LogReal::from_value(m0), LogReal::from_value(a)};
}

// Exact E_x[sum_{k<tau_U} V r^k] <= D V(x) at five rates up to rho.
void expect_transfer_sound(const testing::CertifiedChain& cc, const GeometricTailBound& tail)
{
    const TransferInputs in{tail, LogReal::from_value(cc.c), static_cast<double>(cc.n0)};
    const TransferRate rate = transfer_rate(in);
    const StateSet& target = cc.minorization.small_set;
    for (double t : {0.05, 0.25, 0.5, 0.75, 1.0})
    {
        const Rate r2 = t == 1.0 ? rate.rho : rate.rho.scale_excess(t);
        const TransferBound b = transfer_bound(in, r2);
        const auto exact = mgf_weighted_sums(cc.chain, cc.drift.weight, target, r2.value());
        for (std::size_t x = 0; x < cc.chain.size(); ++x)
        {
            EXPECT_LE(std::log(exact[x]), b.D.log() + std::log(cc.drift.weight(x)) + 1e-12)
                << cc.name << " x=" << x << " t=" << t;
        }
    }
}

TEST(Drift, MgfBoundArithmetic)
{
    EXPECT_NEAR(drift_mgf_bound(0.5, 0.0, 1.5, 1.0), 4.0, 1e-14);
    EXPECT_NEAR(drift_mgf_bound(0.5, 1.0, 1.5, 2.0), 20.0, 1e-13);
    EXPECT_NEAR(drift_factor(0.5, 1.0, Rate::from_value(1.5)).value(), 10.0, 1e-13);
    EXPECT_EQ(code_of([] { drift_mgf_bound(0.5, 1.0, 2.0, 1.0); }), ErrorCode::rate_range);
    EXPECT_EQ(code_of([] { drift_mgf_bound(0.5, 1.0, 1.0, 1.0); }), ErrorCode::rate_range);
}

TEST(Drift, VerifyDrift)
{
    const FiniteChain chain = two_state();
    EXPECT_TRUE(verify_drift(chain, {WeightFunction::constant(2), 0.9, 1.0, StateSet::all(2)}).passed);
    const auto fail = verify_drift(chain, {WeightFunction::constant(2), 0.5, 0.0, StateSet::none(2)});
    EXPECT_FALSE(fail.passed);
    EXPECT_NEAR(fail.margin, -0.5, 1e-15);
    for (const auto& cc : testing::chain_corpus())
    {
        const auto check = verify_drift(cc.chain, cc.drift);
        EXPECT_TRUE(check.passed) << cc.name << " margin " << check.margin;
        auto tight = cc.drift;
        tight.b *= 0.5;
        if (cc.drift.b > 1e-6)
        {
            EXPECT_FALSE(verify_drift(cc.chain, tight).passed) << cc.name;
        }
    }
}

TEST(Drift, VerifyPetiteness)
{
    const FiniteChain chain = two_state();
    const StateSet first(2, {0});
    const StateSet second(2, {1});
    EXPECT_EQ(verify_petiteness(chain, {StateSet::all(2), StateSet::all(2), 1, 1.0}).infimum, 1.0);
    EXPECT_NEAR(verify_petiteness(chain, {second, first, 1, 0.0}).infimum, 0.9, 1e-15);
    // hit at step 1 (0.9), or stay and hit at step 2 (0.1 * 0.9)
    EXPECT_NEAR(verify_petiteness(chain, {second, first, 2, 0.0}).infimum, 0.99, 1e-15);
    EXPECT_TRUE(verify_petiteness(chain, {second, first, 2, 0.99}).passed);
    EXPECT_FALSE(verify_petiteness(chain, {second, first, 1, 0.95}).passed);
}

TEST(Drift, TransferSoundOnMeasuredConstants)
{
    for (const auto& cc : testing::chain_corpus())
    {
        const double r1 = 1.0 + 0.5 * (1.0 / cc.drift.lambda - 1.0);
        expect_transfer_sound(cc, measured_tail(cc, r1));
    }
}

TEST(Drift, TransferSoundOnDriftConstants)
{
    for (const auto& cc : testing::chain_corpus())
    {
        const double sup_v = cc.drift.weight.max_over(cc.drift.set);
        for (double f : {0.2, 0.5, 0.8})
        {
            const Rate r1 = Rate::from_value(1.0 + f * (1.0 / cc.drift.lambda - 1.0));
            expect_transfer_sound(cc, drift_tail_bound(cc.drift.lambda, cc.drift.b, r1, sup_v));
        }
    }
}

TEST(Drift, TransferSoundWhenTargetFollowsEveryVisit)
{
    // c = 1, N0 = 1: from every state the next step lands in U = {0}
    const FiniteChain chain(Matrix::from_rows({{0.6, 0.4, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}));
    testing::CertifiedChain cc;
    cc.name = "certain";
    cc.chain = chain;
    cc.drift = {WeightFunction({1.0, 2.0, 4.0}), 0.5, 1.0, StateSet::all(3)};
    ASSERT_TRUE(verify_drift(chain, cc.drift).passed);
    cc.minorization = {StateSet(3, {0}), 0.6, {1.0, 0.0, 0.0}};
    cc.n0 = 1;
    cc.c = 1.0;
    const auto tail = drift_tail_bound(0.5, 1.0, Rate::from_value(1.5), 4.0);
    const TransferInputs in{tail, LogReal::one(), 1.0};
    const TransferRate rate = transfer_rate(in);
    EXPECT_TRUE(rate.certain);
    EXPECT_EQ(rate.critical, tail.r);
    expect_transfer_sound(cc, tail);
}

TEST(Drift, TransferOnKendallScaleInputs)
{
    // r1 = 1.1 with lambda = 1/1.2, b = 2.043, sup V = 18.4: M0 from the drift bound
    const double m0 = drift_mgf_bound(1.0 / 1.2, 2.043, 1.1, 18.4);
    const double rho = transfer_bound(1.1, m0, 1.0 / 256.0, 8, 1.0 + 1e-12, 10.0).rho;
    ASSERT_GT(rho, 1.0);
    const TransferResult r = transfer_bound(1.1, m0, 1.0 / 256.0, 8, 1.0 + 0.5 * (rho - 1.0), 10.0);
    EXPECT_TRUE(std::isfinite(r.D));
    EXPECT_GT(r.D, m0);
}

TEST(Drift, TransferErrors)
{
    const TransferResult ok = transfer_bound(1.5, 3.0, 0.5, 2, 1.001, 3.0);
    EXPECT_EQ(code_of([&] { transfer_bound(1.5, 3.0, 0.5, 2, ok.rho * 1.01, 3.0); }),
              ErrorCode::r2_too_large);
    EXPECT_EQ(code_of([] { transfer_bound(1.5, 3.0, 0.0, 2, 1.001, 3.0); }),
              ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([] { transfer_bound(1.5, 0.5, 0.5, 2, 1.001, 3.0); }),
              ErrorCode::invalid_argument);
    // guard band: the reported rate sits strictly inside the critical one
    const TransferInputs in{drift_tail_bound(0.5, 1.0, Rate::from_value(1.5), 2.0),
                            LogReal::from_value(0.3), 2.0};
    const TransferRate rate = transfer_rate(in);
    EXPECT_LT(rate.rho, rate.critical);
    EXPECT_NEAR(rate.rho.log_kappa() - rate.critical.log_kappa(), std::log1p(-1e-9), 1e-15);
    EXPECT_EQ(code_of([&] { transfer_bound(in, rate.critical); }), ErrorCode::r2_too_large);
}

TEST(Drift, TransferMonotonicity)
{
    // D non-increasing in c, non-decreasing in M0, N0 and r2
    const double r2 = 1.0 + 1e-7;
    const std::vector<double> cs{0.01, 0.05, 0.2, 0.5, 0.9, 1.0};
    const std::vector<double> m0s{1.0, 2.0, 5.0, 20.0};
    const std::vector<std::size_t> n0s{1, 2, 4, 8};
    for (double m0 : m0s)
    {
        for (std::size_t n0 : n0s)
        {
            double previous = INFINITY;
            for (double c : cs)
            {
                const double d = transfer_bound(1.2, m0, c, n0, r2, 2.0).D;
                EXPECT_LE(d, previous * (1.0 + 1e-14));
                previous = d;
            }
        }
    }
    for (double c : cs)
    {
        for (std::size_t n0 : n0s)
        {
            double previous = 0.0;
            for (double m0 : m0s)
            {
                const double d = transfer_bound(1.2, m0, c, n0, r2, 2.0).D;
                EXPECT_GE(d * (1.0 + 1e-14), previous);
                previous = d;
            }
        }
        for (double m0 : m0s)
        {
            double previous = 0.0;
            for (std::size_t n0 : n0s)
            {
                const double d = transfer_bound(1.2, m0, c, n0, r2, 2.0).D;
                EXPECT_GE(d * (1.0 + 1e-14), previous);
                previous = d;
            }
            const double rho = transfer_bound(1.2, m0, c, 1, r2, 2.0).rho;
            previous = 0.0;
            for (double t : {0.1, 0.3, 0.6, 0.9, 0.99})
            {
                const double d = transfer_bound(1.2, m0, c, 1, 1.0 + t * (rho - 1.0), 2.0).D;
                EXPECT_GE(d * (1.0 + 1e-14), previous);
                previous = d;
            }
        }
    }
}

TEST(Drift, TransferHandlesAstronomicalInputs)
{
    // c far below double range: everything stays finite in log form
    const TransferInputs in{{Rate::from_value(1.5), LogReal::from_log(50.0), LogReal::from_log(40.0)},
                            LogReal::from_log(-5000.0),
                            8.0};
    const TransferRate rate = transfer_rate(in);
    EXPECT_TRUE(std::isfinite(rate.rho.log_kappa()));
    const TransferBound b = transfer_bound(in, rate.rho.midpoint());
    EXPECT_TRUE(b.D.is_finite());
    EXPECT_GT(b.D.log(), 5000.0);
}

}  // namespace
}  // namespace ergo
