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

// The delta/2 split of a chain at a small set U. State x of the base chain
// becomes x_0 (index x) and x_1 (index n + x); the level-1 copy of U is an
// atom whose exit law is mu*, the split image of mu.

#include <cstddef>
#include <span>
#include <vector>

#include "ergo/chain.hpp"
#include "ergo/matrix.hpp"

namespace ergo
{

struct MinorizationCertificate
{
    StateSet small_set;
    double delta = 0.0;
    std::vector<double> mu;
};

struct MinorizationCheck
{
    bool passed = false;
    /// min over x in U, y of P(x, y) - delta mu(y)
    double margin = 0.0;
    std::size_t worst_from = 0;
    std::size_t worst_to = 0;
    /// |mu(U) - 1|
    double mu_mass_error = 0.0;
};

MinorizationCheck verify_minorization(const FiniteChain& chain, const MinorizationCertificate& cert);

/// lambda* on 2n states.
std::vector<double> split_measure(std::span<const double> lambda,
                                  const MinorizationCertificate& cert);

/// Sums the two levels back onto n states.
std::vector<double> collapse_levels(std::span<const double> split);

struct SplitChain
{
    FiniteChain base;
    MinorizationCertificate cert;
    FiniteChain chain;
    StateSet atom;
    WeightFunction vhat;

    std::size_t base_size() const { return base.size(); }
    std::size_t level0(std::size_t x) const { return x; }
    std::size_t level1(std::size_t x) const { return base.size() + x; }
    /// A representative atom state.
    std::size_t alpha() const { return atom.members().front(); }
    /// U_0 u U_1
    StateSet lifted(const StateSet& base_set) const;
};

/// Throws NEGATIVE_ROW if a split row has an entry below -1e-12.
SplitChain split_chain(const FiniteChain& base, const MinorizationCertificate& cert,
                       const WeightFunction& weight);
SplitChain split_chain(const FiniteChain& base, const MinorizationCertificate& cert);

/// delta^2 / (2 (2 - delta))
double atom_access_bound(double delta);

struct AtomAccessCheck
{
    bool passed = false;
    /// min over x in U, both levels, of P(x_i, U_1)
    double min_access = 0.0;
    /// max over x in U of |P(x_1, U_1) - delta/2|
    double level1_error = 0.0;
};

AtomAccessCheck check_atom_access(const SplitChain& split);

struct AtomIncrement
{
    /// probs[n - 1] = P_alpha{tau_alpha = n}
    std::vector<double> probs;
    /// P_alpha{tau_alpha > horizon}
    double tail = 0.0;
};

/// Throws HYPOTHESIS_FAIL unless p(1) = delta/2 within 1e-12.
AtomIncrement atom_increment(const SplitChain& split, std::size_t horizon);

struct RegenerativeSequences
{
    std::size_t horizon = 0;
    /// first_entrance(x, n - 1) = P_x{tau_alpha = n}
    Matrix first_entrance;
    /// u[n] = P^n(alpha, U_1), n = 0..N
    std::vector<double> u;
    /// taboo[n - 1] = E_alpha[g(X_n); tau_alpha >= n]
    std::vector<double> taboo;
};

RegenerativeSequences regenerative_sequences(const SplitChain& split, std::span<const double> g,
                                             std::size_t horizon);

struct RegenerativeCheck
{
    bool passed = false;
    double residual = 0.0;
    std::size_t worst_source = 0;
};

/// Both sides of the last-exit decomposition at the atom,
/// P^n(x, C) = alpha P^n(x, C) + sum_{j<n} sum_{k<=j} a_x(k) u(j-k) t_C(n-j).
RegenerativeCheck regenerative_check(const SplitChain& split, std::size_t n,
                                     const StateSet& target);

struct InvariantReport
{
    /// |pi(alpha) E_alpha[tau_alpha] - 1|
    double kac_error = 0.0;
    /// |pi(g) - pi(alpha) sum_{k<=K} t_g(k)|
    double series_gap = 0.0;
    /// pi(alpha) times the certified bound on the series remainder
    double series_tail = 0.0;
    /// max_y |(pi_marg P)(y) - pi_marg(y)|
    double marginal_error = 0.0;
    /// max_y |pi_marg(y) - pi(y)| against the base chain's own law
    double marginal_vs_base = 0.0;
    /// scale applied to g so that |g| <= V-hat
    double g_scale = 1.0;
    /// series terms summed before the survival mass fell below 1e-18
    std::size_t terms = 0;
    bool passed = false;
};

/// Propagates NON_UNIQUE.
InvariantReport invariant_identities(const SplitChain& split, std::span<const double> g,
                                     std::size_t max_terms = 1000000);

struct SplitDrift
{
    /// max over reachable states outside C_0 u C_1 of (P V-hat) / V-hat
    double lambda = 0.0;
    /// max over reachable states in C_0 u C_1 of P V-hat - lambda V-hat, at least 0
    double b = 0.0;
    /// whether the base (lambda, b) also hold on the split chain
    bool base_constants_hold = false;
};

SplitDrift measure_split_drift(const SplitChain& split, const StateSet& drift_set, double lambda,
                               double b);

}  // namespace ergo
