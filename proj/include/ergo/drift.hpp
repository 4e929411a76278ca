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

// Drift certificates, their moment bound on return times, quantitative
// petiteness, and the transfer of geometric return-time bounds from a drift
// set C to a target set B.
//
// Transfer scheme. Split a trajectory at its successive C-visits t_1 < t_2 <
// ... and run a trial at every N0-th visit: the trial succeeds when B is hit
// within N0 steps, which happens with conditional probability >= c and
// guarantees tau_B <= t_{j+N0}. Each group of N0 inter-visit blocks costs at
// most M0 * sum_{m<N0} R^m in r-weighted V units, with R = 1 + (r-1) M0
// bounding E_x[r^tau_C] on C. A failed trial followed by N0 blocks carries
// weight at most theta(r) = (1-c)^{1-1/q} R1^{N0/q}, q = ln r1 / ln r
// (Hoelder against E[r1^{N0 blocks}] <= R1^{N0}). Writing ell = -ln(1-c),
// theta(r) < 1 exactly when ln r < ln r1 * ell / (ell + N0 ln R1) =: ln rho*.
// Then for r < rho*
//   E_x[sum_{k<tau_B} V(X_k) r^k]
//     <= A V(x) + (1 + (r-1) A V(x)) * M0 * S_{N0}(R) / (1 - theta(r))
//     <= D V(x),  D = A + (1 + (r-1) A) M0 S_{N0}(R) / (1 - theta(r)),
// where A bounds the initial segment to the first C-visit, uniformly in x,
// as a multiple of V(x).

#include <cstddef>
#include <optional>

#include "ergo/chain.hpp"
#include "ergo/logreal.hpp"

namespace ergo
{

struct DriftCertificate
{
    WeightFunction weight;
    double lambda = 0.0;
    double b = 0.0;
    StateSet set;
};

struct PetitenessCertificate
{
    StateSet source;
    StateSet target;
    std::size_t n0 = 1;
    double c = 0.0;
};

/// sup_{x in C} E_x[sum_{k<tau_C} V(X_k) r^k] <= M0 and, for every x,
/// E_x[sum_{k<tau_C} V(X_k) r^k] <= initial_factor * V(x).
struct GeometricTailBound
{
    Rate r;
    LogReal M0;
    LogReal initial_factor;
};

/// (1 + r b) / (1 - lambda r)
LogReal drift_factor(double lambda, double b, Rate r);

/// (1 + r b) / (1 - lambda r) * Vx. Throws RATE_RANGE unless 1 < r < 1/lambda.
double drift_mgf_bound(double lambda, double b, double r, double vx);

struct DriftCheck
{
    bool passed = false;
    std::size_t worst_state = 0;
    /// min_x [lambda V(x) + b 1_C(x) - PV(x)]
    double margin = 0.0;
};

DriftCheck verify_drift(const FiniteChain& chain, const DriftCertificate& cert);

struct PetitenessCheck
{
    bool passed = false;
    std::size_t worst_state = 0;
    /// inf_{x in source} P_x{tau_target <= N0}
    double infimum = 0.0;
};

PetitenessCheck verify_petiteness(const FiniteChain& chain, const PetitenessCertificate& cert);

/// The bound derived from a drift certificate at rate r in (1, 1/lambda):
/// initial_factor = (1 + r b)/(1 - lambda r), M0 = initial_factor * sup_C V.
GeometricTailBound drift_tail_bound(double lambda, double b, Rate r, double sup_v_on_set);

struct TransferInputs
{
    GeometricTailBound tail;
    /// lower bound on inf_{x in C} P_x{tau_B <= N0}
    LogReal c;
    double n0 = 1.0;
};

struct TransferRate
{
    /// Reported rate: the critical rate pulled in by a relative guard band of
    /// 1e-9 in ln r.
    Rate rho;
    Rate critical;
    /// ln ell, with ell = -ln(1 - c) or its lower bound c once c underflows
    double log_ell = 0.0;
    /// ln R1, R1 = 1 + (r1 - 1) M0
    double log_r1_block = 0.0;
    bool certain = false;
};

TransferRate transfer_rate(const TransferInputs& in);

struct TransferBound
{
    TransferRate rate;
    Rate r2;
    LogReal D;
    /// ln(1 - theta(r2))
    double log_contraction_gap = 0.0;
};

/// Throws R2_TOO_LARGE when r2 exceeds the reported rho.
TransferBound transfer_bound(const TransferInputs& in, Rate r2);

/// Plain-double convenience form. initial_factor bounds the initial segment
/// for starts outside C as a multiple of V(x).
struct TransferResult
{
    double rho = 0.0;
    double D = 0.0;
};
TransferResult transfer_bound(double r1, double M0, double c, std::size_t n0, double r2,
                              double initial_factor);

}  // namespace ergo
