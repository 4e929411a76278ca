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

// Kendall-type geometric rates for renewal sequences, obtained from a drift
// certificate on the bivariate forward-recurrence chain (V_t, V_t'), two
// independent copies of the forward recurrence chain, run until both sit at 1.

#include <cstddef>
#include <utility>
#include <vector>

#include "ergo/chain.hpp"
#include "ergo/drift.hpp"
#include "ergo/logreal.hpp"
#include "ergo/renewal.hpp"

namespace ergo
{

struct BivariateChain
{
    IncrementDistribution increments;
    FiniteChain chain;
    std::size_t support = 0;

    /// State (a, b) with a, b in 1..L.
    std::size_t index(std::size_t a, std::size_t b) const { return (a - 1) * support + (b - 1); }
    std::pair<std::size_t, std::size_t> coords(std::size_t i) const
    {
        return {i / support + 1, i % support + 1};
    }
};

BivariateChain bivariate_chain(const IncrementDistribution& p);

/// V(a, b) = (r^{a-1} + r^{b-1}) / 2
double lyapunov_value(std::size_t a, std::size_t b, double r);
WeightFunction lyapunov_weights(const BivariateChain& biv, double r);

/// Drift level M and constant b for V at rate r with lambda = eta, where
/// S >= sum_n p(n) r^n. The drift set is the pair of rays
/// {(1, b) : b <= M} u {(a, 1) : a <= M}.
struct BivariateDrift
{
    double M = 1.0;
    /// b = max{2S, S + r^{M-1}} / (2r)
    LogReal b;
    /// sup of V over the drift set, (1 + r^{M-1}) / 2
    LogReal sup_v;
};

/// eta_fraction f fixes eta r - 1 = f (r - 1); S_excess = S - 1.
BivariateDrift bivariate_drift_level(LogReal S_excess, Rate r, double eta_fraction);

StateSet bivariate_drift_set(const BivariateChain& biv, std::size_t M);

struct BivariateDriftCertificate
{
    std::size_t M = 1;
    StateSet set;
    double b_drift = 0.0;
    DriftCertificate certificate;
};

/// Certificate built from the exact S = sum_n p(n) r^n and checked pointwise
/// on the chain; throws DRIFT_VIOLATION if the check fails.
BivariateDriftCertificate bivariate_drift(const BivariateChain& biv, double r, double eta);

struct BivariatePetiteness
{
    /// p(1)^{max(M, 2)}
    double certified = 0.0;
    /// inf over the drift set of P{tau_(1,1) <= M}
    double exact = 0.0;
};

/// Throws HYPOTHESIS_FAIL if the exact infimum falls below the certified value.
BivariatePetiteness bivariate_petiteness(const BivariateChain& biv, std::size_t M);

/// beta^{max(M, 2)}. From (1, 1) a single step meets (1, 1) only with
/// probability p(1)^2, hence the exponent floor.
LogReal petiteness_bound(double beta, double M);

struct KendallInputs
{
    /// lower bound on p(1)
    double beta = 0.0;
    /// B - 1, where B >= sum_n p(n) r^n
    LogReal B_excess;
    Rate r;
    /// eta r - 1 = eta_fraction (r - 1)
    double eta_fraction = 0.5;
    /// return-time rate r' - 1 = return_fraction (1/eta - 1)
    double return_fraction = 0.5;
};

struct KendallBound
{
    KendallInputs inputs;
    double eta = 0.0;
    /// ln(1 - eta)
    double log_one_minus_eta = 0.0;
    BivariateDrift drift;
    Rate return_rate;
    GeometricTailBound tail;
    LogReal c;
    TransferRate rate;
    Rate rho;
    Rate r2;
    LogReal D;
    /// sum_n |u(n) - pi(1)| r2^n <= L
    LogReal L;
};

/// Everything up to and including rho.
KendallBound kendall_rate(const KendallInputs& in);

/// Full constants at r2; throws R2_TOO_LARGE when r2 > rho.
KendallBound kendall_constants(const KendallInputs& in, Rate r2);

/// eta in (1/r, 1) mapped to its fraction; throws ETA_RANGE otherwise.
double eta_fraction_of(double eta, double r);

KendallBound kendall_rate(double beta, double B, double r, double eta);
KendallBound kendall_constants(double beta, double B, double r, double eta, double r2);

/// Per-delay form: E[r2^{T_{0,n}}] <= D r2 / (2 (r2 - 1)) * r2^n for a start
/// at (1, n+1).
LogReal kendall_delay_bound(const KendallBound& k, std::size_t n);

/// Tighter per-delay form used for L: 1 + (r2 - 1) D V(1, n+1).
LogReal kendall_delay_bound_tight(const KendallBound& k, std::size_t n);

struct KendallVerification
{
    std::size_t horizon = 0;
    double partial_sum = 0.0;
    /// exact bound on sum_{n > N} |u(n) - pi(1)| r2^n
    double tail = 0.0;
    double total = 0.0;
    LogReal L;
    bool passed = false;
};

/// Checks sum_n |u(n) - pi(1)| r2^n <= L for a concrete p.
KendallVerification kendall_verify(const IncrementDistribution& p, const KendallBound& bound,
                                   std::size_t horizon);

}  // namespace ergo
