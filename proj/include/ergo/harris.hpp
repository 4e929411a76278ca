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

// Effective constants (D, gamma) for |P^n phi(x) - pi(phi)| <= D V(x) ||phi||_V gamma^n
// from a small set, a drift certificate and a petiteness constant.
//
// Pipeline, all in log form:
//   1. drift -> return-time bound on C at r1 = 1 + f (1/lambda - 1)
//   2. transfer C -> U with (N0, c)                      -> rho_U, D_U at r_U
//   3. split at U; starts in U_0 u U_1 cost at most D_U' = (D_U - delta/2)/(1 - delta/2)
//      per unit of V; transfer U_0 u U_1 -> U_1 with N0 = 1 and
//      c = delta^2 / (2 (2 - delta))                     -> rho_a, D_a
//   4. atom returns: E[r3^tau] <= B_a = 1 + (r3 - 1) D_a(r3) M_U; renewal rate
//      with beta = delta/2                               -> rho_K, L
//   5. r = interior point of (1, min(rho_U, rho_a, rho_K)); last-exit
//      decomposition at the atom gives
//        D = c1 + e1 T (1 + L) + T (D_a + r/(r-1))
//      with c1 = D_a + M_U (1 + (r-1) D_a), e1 = 1 + (r-1) D_a,
//           T = D_a M_U + M_U (1 + (r-1) D_a M_U),  and gamma = 1/r.

#include <cstddef>
#include <string>
#include <vector>

#include "ergo/chain.hpp"
#include "ergo/drift.hpp"
#include "ergo/error.hpp"
#include "ergo/kendall.hpp"
#include "ergo/logreal.hpp"
#include "ergo/splitting.hpp"

namespace ergo
{

struct HarrisInputs
{
    double delta = 0.0;
    double lambda = 0.0;
    double b = 0.0;
    std::size_t n0 = 1;
    double c = 0.0;
    double M_U = 1.0;
    double M_C = 1.0;

    friend bool operator==(const HarrisInputs&, const HarrisInputs&) = default;
};

/// Position of each free rate inside its admissible interval, as a fraction
/// of the excess over 1.
struct HarrisTunables
{
    double r1 = 0.5;
    double r_U = 0.5;
    double r3 = 0.5;
    double r_final = 0.5;
    double eta = 0.5;
    double kendall_return = 0.5;
};

enum class TraceKind
{
    /// log_value holds ln x
    magnitude,
    /// log_value holds ln ln r for a rate r > 1
    rate,
    /// log_value holds the plain value
    count,
};

struct TraceEntry
{
    std::string stage;
    std::string name;
    TraceKind kind = TraceKind::magnitude;
    double log_value = 0.0;
};

struct HarrisBound
{
    HarrisInputs inputs;
    HarrisTunables tunables;
    LogReal D;
    Rate rate;
    KendallBound kendall;
    std::vector<TraceEntry> trace;

    /// 1/r; rounds to 1 once ln r drops below double epsilon.
    double gamma() const { return std::exp(-rate.kappa()); }
    /// ln(-ln gamma); finite exactly when gamma < 1.
    double log_kappa() const { return rate.log_kappa(); }
};

class HypothesisError : public Error
{
public:
    HypothesisError(std::string clause, std::size_t state, const std::string& what)
        : Error(ErrorCode::hypothesis_fail,
                clause + " (state " + std::to_string(state) + "): " + what),
          clause_(std::move(clause)),
          state_(state)
    {
    }
    const std::string& clause() const { return clause_; }
    std::size_t state() const { return state_; }

private:
    std::string clause_;
    std::size_t state_;
};

/// Checks the three hypotheses exactly and returns the measured inputs,
/// with c the exact petiteness infimum. Throws HypothesisError.
HarrisInputs verify_hypotheses(const FiniteChain& chain, const MinorizationCertificate& mcert,
                               const DriftCertificate& dcert, std::size_t n0);

HarrisBound harris_constants(const HarrisInputs& inputs, const HarrisTunables& tunables = {});

struct BoundRow
{
    std::size_t n = 0;
    double exact_distance = 0.0;
    /// ln(D V(x) gamma^n)
    double log_bound = 0.0;
};

struct HarrisVerification
{
    bool passed = true;
    std::size_t horizon = 0;
    std::size_t worst_state = 0;
    std::size_t worst_n = 0;
    /// max over (x, n) of ln(distance - 1e-13) - ln(bound); -inf when no distance
    /// exceeds the rounding allowance. The check passes iff this is <= 0.
    double worst_log_ratio = logspace::neg_inf;
    std::size_t source = 0;
    /// rows for the designated source state
    std::vector<BoundRow> rows;
};

/// Exact check of the bound for every state and n = 1..N, without throwing.
HarrisVerification check_harris_bound(const FiniteChain& chain, const WeightFunction& weight,
                                      const HarrisBound& bound, std::size_t horizon,
                                      std::size_t source = 0);

/// As above; throws BOUND_VIOLATION naming the offending (x, n).
HarrisVerification verify_harris_bound(const FiniteChain& chain, const WeightFunction& weight,
                                       const HarrisBound& bound, std::size_t horizon,
                                       std::size_t source = 0);

/// Scientific rendering of e^{log_value}, also far outside double range.
/// Precision of the mantissa degrades with the size of log_value.
std::string format_log_value(double log_value);

}  // namespace ergo
