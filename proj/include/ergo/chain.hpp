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

// Exact computations on finite-state chains: n-step kernels, the stationary
// law, taboo kernels, hitting-time laws and their generating functions, and
// the V-weighted distance to stationarity.
//
// Hitting times use the return convention tau_A = min{n >= 1 : X_n in A},
// also when the chain starts inside A.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "ergo/matrix.hpp"

namespace ergo
{

inline constexpr double kStochasticTolerance = 1e-12;

/// A subset of {0, ..., universe - 1}.
class StateSet
{
public:
    StateSet() = default;
    StateSet(std::size_t universe, std::span<const std::size_t> members);
    StateSet(std::size_t universe, std::initializer_list<std::size_t> members)
        : StateSet(universe, std::span<const std::size_t>(members.begin(), members.size()))
    {
    }

    static StateSet all(std::size_t universe);
    static StateSet none(std::size_t universe) { return StateSet(universe, {}); }

    std::size_t universe() const { return mask_.size(); }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(std::size_t i) const { return i < mask_.size() && mask_[i] != 0; }
    std::span<const std::size_t> members() const { return members_; }

    StateSet complement() const;

    friend bool operator==(const StateSet&, const StateSet&) = default;

private:
    std::vector<std::size_t> members_;
    std::vector<char> mask_;
};

class FiniteChain
{
public:
    FiniteChain() = default;
    /// Throws unless the matrix is square, nonnegative and row-stochastic
    /// within kStochasticTolerance.
    FiniteChain(std::vector<std::string> states, Matrix matrix);
    explicit FiniteChain(Matrix matrix);

    std::size_t size() const { return matrix_.rows(); }
    const Matrix& matrix() const { return matrix_; }
    const std::vector<std::string>& states() const { return states_; }
    std::size_t index_of(const std::string& label) const;

    double operator()(std::size_t from, std::size_t to) const { return matrix_(from, to); }
    std::span<const double> row(std::size_t i) const { return matrix_.row(i); }

    /// P(x, A)
    double mass(std::size_t from, const StateSet& target) const;

private:
    std::vector<std::string> states_;
    Matrix matrix_;
};

class WeightFunction
{
public:
    WeightFunction() = default;
    explicit WeightFunction(std::vector<double> values);
    static WeightFunction constant(std::size_t n, double value = 1.0);

    std::size_t size() const { return values_.size(); }
    double operator()(std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }
    double max_over(const StateSet& set) const;

private:
    std::vector<double> values_;
};

struct HittingLaw
{
    StateSet target;
    std::size_t source = 0;
    std::size_t horizon = 0;
    /// probs[n - 1] = P_source{tau_target = n}
    std::vector<double> probs;

    double at(std::size_t n) const { return probs.at(n - 1); }
};

Matrix n_step(const FiniteChain& chain, std::size_t n);

/// Unique stationary law. Throws NON_UNIQUE when the fixed space of P^T has
/// dimension above one.
std::vector<double> stationary(const FiniteChain& chain);

/// _B P^n(x, y) = P_x{X_n = y, tau_B >= n}, n >= 1.
Matrix taboo_kernel(const FiniteChain& chain, const StateSet& taboo, std::size_t n);

/// Row-vector form of the taboo recursion: given mu_n(y) = P{X_n = y, tau_B >= n},
/// return mu_{n+1}.
std::vector<double> taboo_step(const FiniteChain& chain, const StateSet& taboo,
                               std::span<const double> current);

HittingLaw hitting_law(const FiniteChain& chain, std::size_t source, const StateSet& target,
                       std::size_t horizon);

/// Law of tau_target when X_0 ~ initial; element n-1 holds P{tau = n}.
std::vector<double> hitting_law_from(const FiniteChain& chain, std::span<const double> initial,
                                     const StateSet& target, std::size_t horizon);

/// P_source{tau_target > n}
double hitting_tail(const FiniteChain& chain, std::size_t source, const StateSet& target,
                    std::size_t n);

/// E_x[sum_{k=0}^{tau_A - 1} V(X_k) r^k]. Throws DIVERGENT when r times the
/// taboo block reachable from x has spectral radius >= 1 - 1e-9.
double mgf_weighted_sum(const FiniteChain& chain, const WeightFunction& weight, std::size_t source,
                        const StateSet& target, double r);

/// The same quantity for every starting state at once.
std::vector<double> mgf_weighted_sums(const FiniteChain& chain, const WeightFunction& weight,
                                      const StateSet& target, double r);

/// E_x[r^{tau_A}] for every x.
std::vector<double> hitting_mgf(const FiniteChain& chain, const StateSet& target, double r);

/// E_x[tau_A] for every x.
std::vector<double> expected_hitting_time(const FiniteChain& chain, const StateSet& target);

/// sum_y |P^n(x, y) - pi(y)| V(y)
double vnorm_distance(const FiniteChain& chain, const WeightFunction& weight, std::size_t source,
                      std::size_t n, std::span<const double> pi);

/// Distances for n = 1..horizon from one source; element n-1 holds step n.
std::vector<double> vnorm_distances(const FiniteChain& chain, const WeightFunction& weight,
                                    std::size_t source, std::size_t horizon,
                                    std::span<const double> pi);

}  // namespace ergo
