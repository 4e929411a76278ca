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

#include "ergo/chain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "ergo/error.hpp"
#include "ergo/simd.hpp"

namespace ergo
{

StateSet::StateSet(std::size_t universe, std::span<const std::size_t> members)
    : mask_(universe, 0)
{
    for (std::size_t m : members)
    {
        require(m < universe, "state index out of range");
        mask_[m] = 1;
    }
    for (std::size_t i = 0; i < universe; ++i)
    {
        if (mask_[i] != 0)
        {
            members_.push_back(i);
        }
    }
}

StateSet StateSet::all(std::size_t universe)
{
    std::vector<std::size_t> idx(universe);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return StateSet(universe, idx);
}

StateSet StateSet::complement() const
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < mask_.size(); ++i)
    {
        if (mask_[i] == 0)
        {
            idx.push_back(i);
        }
    }
    return StateSet(mask_.size(), idx);
}

FiniteChain::FiniteChain(std::vector<std::string> states, Matrix matrix)
    : states_(std::move(states)), matrix_(std::move(matrix))
{
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    {
        throw Error(ErrorCode::validation_error, "transition matrix must be square and nonempty");
    }
    if (states_.size() != matrix_.rows())
    {
        throw Error(ErrorCode::validation_error, "state labels do not match matrix size");
    }
    for (std::size_t i = 0; i < matrix_.rows(); ++i)
    {
        double total = 0.0;
        for (double v : matrix_.row(i))
        {
            if (!(v >= 0.0) || !std::isfinite(v))
            {
                throw Error(ErrorCode::validation_error,
                            "row-stochastic: negative or non-finite entry in row " +
                                std::to_string(i));
            }
            total += v;
        }
        if (std::fabs(total - 1.0) > kStochasticTolerance)
        {
            throw Error(ErrorCode::validation_error,
                        "row-stochastic: row " + std::to_string(i) + " sums to " +
                            std::to_string(total));
        }
    }
}

FiniteChain::FiniteChain(Matrix matrix)
    : FiniteChain(
          [&] {
              std::vector<std::string> labels(matrix.rows());
              for (std::size_t i = 0; i < labels.size(); ++i)
              {
                  labels[i] = std::to_string(i);
              }
              return labels;
          }(),
          std::move(matrix))
{
}

std::size_t FiniteChain::index_of(const std::string& label) const
{
    auto it = std::find(states_.begin(), states_.end(), label);
    if (it == states_.end())
    {
        throw Error(ErrorCode::validation_error, "unknown state label '" + label + "'");
    }
    return static_cast<std::size_t>(it - states_.begin());
}

double FiniteChain::mass(std::size_t from, const StateSet& target) const
{
    double total = 0.0;
    for (std::size_t y : target.members())
    {
        total += matrix_(from, y);
    }
    return total;
}

WeightFunction::WeightFunction(std::vector<double> values) : values_(std::move(values))
{
    for (double v : values_)
    {
        if (!(v >= 1.0) || !std::isfinite(v))
        {
            throw Error(ErrorCode::validation_error, "weight function values must be >= 1");
        }
    }
}

WeightFunction WeightFunction::constant(std::size_t n, double value)
{
    return WeightFunction(std::vector<double>(n, value));
}

double WeightFunction::max_over(const StateSet& set) const
{
    double best = 0.0;
    for (std::size_t i : set.members())
    {
        best = std::max(best, values_[i]);
    }
    return best;
}

Matrix n_step(const FiniteChain& chain, std::size_t n)
{
    Matrix result = Matrix::identity(chain.size());
    Matrix base = chain.matrix();
    while (n > 0)
    {
        if (n & 1U)
        {
            result = result * base;
        }
        n >>= 1U;
        if (n > 0)
        {
            base = base * base;
        }
    }
    return result;
}

namespace
{

Eigen::MatrixXd to_eigen(const Matrix& m)
{
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
    {
        for (std::size_t j = 0; j < m.cols(); ++j)
        {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    return out;
}

double stationarity_residual(const FiniteChain& chain, std::span<const double> pi)
{
    const auto moved = chain.matrix().left_multiply(pi);
    double residual = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i)
    {
        residual += std::fabs(moved[i] - pi[i]);
    }
    return residual;
}

}  // namespace

std::vector<double> stationary(const FiniteChain& chain)
{
    const auto n = static_cast<Eigen::Index>(chain.size());
    Eigen::MatrixXd balance = to_eigen(chain.matrix()).transpose();
    balance -= Eigen::MatrixXd::Identity(n, n);

    Eigen::FullPivLU<Eigen::MatrixXd> rank_probe(balance);
    rank_probe.setThreshold(1e-10);
    if (n - rank_probe.rank() > 1)
    {
        throw Error(ErrorCode::non_unique, "stationary law is not unique (nullity " +
                                               std::to_string(n - rank_probe.rank()) + ")");
    }

    // Swap the last balance equation for the normalisation constraint.
    Eigen::MatrixXd system = balance;
    system.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    Eigen::VectorXd x = lu.solve(rhs);
    for (int round = 0; round < 3; ++round)
    {
        const Eigen::VectorXd residual = rhs - system * x;
        if (residual.lpNorm<1>() < 1e-15)
        {
            break;
        }
        x += lu.solve(residual);
    }

    std::vector<double> pi(chain.size());
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        pi[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
        total += pi[static_cast<std::size_t>(i)];
    }
    for (double& v : pi)
    {
        v /= total;
    }
    if (stationarity_residual(chain, pi) >= 1e-12)
    {
        throw Error(ErrorCode::non_unique, "stationary solve did not reach residual 1e-12");
    }
    return pi;
}

std::vector<double> taboo_step(const FiniteChain& chain, const StateSet& taboo,
                               std::span<const double> current)
{
    std::vector<double> next(chain.size(), 0.0);
    for (std::size_t y = 0; y < chain.size(); ++y)
    {
        if (current[y] != 0.0 && !taboo.contains(y))
        {
            simd::axpy(current[y], chain.row(y), next);
        }
    }
    return next;
}

Matrix taboo_kernel(const FiniteChain& chain, const StateSet& taboo, std::size_t n)
{
    require(n >= 1, "taboo kernel needs n >= 1");
    Matrix current = chain.matrix();
    for (std::size_t step = 1; step < n; ++step)
    {
        Matrix next(chain.size(), chain.size());
        for (std::size_t x = 0; x < chain.size(); ++x)
        {
            const auto row = taboo_step(chain, taboo, current.row(x));
            std::copy(row.begin(), row.end(), next.row(x).begin());
        }
        current = std::move(next);
    }
    return current;
}

namespace
{

double mass_on(std::span<const double> v, const StateSet& set)
{
    double total = 0.0;
    for (std::size_t y : set.members())
    {
        total += v[y];
    }
    return total;
}

double mass_off(std::span<const double> v, const StateSet& set)
{
    double total = 0.0;
    for (std::size_t y = 0; y < v.size(); ++y)
    {
        if (!set.contains(y))
        {
            total += v[y];
        }
    }
    return total;
}

}  // namespace

std::vector<double> hitting_law_from(const FiniteChain& chain, std::span<const double> initial,
                                     const StateSet& target, std::size_t horizon)
{
    require(horizon >= 1, "hitting law horizon must be >= 1");
    require(initial.size() == chain.size(), "initial law has wrong dimension");
    std::vector<double> probs;
    probs.reserve(horizon);
    std::vector<double> current = chain.matrix().left_multiply(initial);
    for (std::size_t n = 1; n <= horizon; ++n)
    {
        if (n > 1)
        {
            current = taboo_step(chain, target, current);
        }
        probs.push_back(mass_on(current, target));
    }
    return probs;
}

HittingLaw hitting_law(const FiniteChain& chain, std::size_t source, const StateSet& target,
                       std::size_t horizon)
{
    require(source < chain.size(), "source state out of range");
    std::vector<double> start(chain.size(), 0.0);
    start[source] = 1.0;
    return HittingLaw{target, source, horizon, hitting_law_from(chain, start, target, horizon)};
}

double hitting_tail(const FiniteChain& chain, std::size_t source, const StateSet& target,
                    std::size_t n)
{
    if (n == 0)
    {
        return 1.0;
    }
    std::vector<double> current(chain.row(source).begin(), chain.row(source).end());
    for (std::size_t step = 1; step < n; ++step)
    {
        current = taboo_step(chain, target, current);
    }
    return mass_off(current, target);
}

namespace
{

// Solves h = c + r Q h over `active` (a subset of the target's complement that
// is closed under Q-transitions), then extends to every state through one
// first step: H(x) = base(x) + r sum_{y in active} P(x, y) h(y).
std::vector<double> first_step_solve(const FiniteChain& chain, const std::vector<std::size_t>& active,
                                     std::span<const double> c, std::span<const double> base,
                                     double r)
{
    const auto m = static_cast<Eigen::Index>(active.size());
    std::vector<double> h_full(chain.size(), 0.0);
    if (m > 0)
    {
        Matrix q(active.size(), active.size());
        for (std::size_t i = 0; i < active.size(); ++i)
        {
            for (std::size_t j = 0; j < active.size(); ++j)
            {
                q(i, j) = chain(active[i], active[j]);
            }
        }
        const double radius = r * spectral_radius(q);
        if (radius >= 1.0 - 1e-9)
        {
            throw Error(ErrorCode::divergent,
                        "scaled taboo block has spectral radius " + std::to_string(radius));
        }
        Eigen::MatrixXd system = Eigen::MatrixXd::Identity(m, m) - r * to_eigen(q);
        Eigen::VectorXd rhs(m);
        for (Eigen::Index i = 0; i < m; ++i)
        {
            rhs(i) = c[active[static_cast<std::size_t>(i)]];
        }
        const Eigen::VectorXd h = system.partialPivLu().solve(rhs);
        for (Eigen::Index i = 0; i < m; ++i)
        {
            h_full[active[static_cast<std::size_t>(i)]] = h(i);
        }
    }
    std::vector<double> out(chain.size());
    for (std::size_t x = 0; x < chain.size(); ++x)
    {
        double acc = 0.0;
        for (std::size_t y : active)
        {
            acc += chain(x, y) * h_full[y];
        }
        out[x] = base[x] + r * acc;
    }
    return out;
}

std::vector<std::size_t> reachable_avoiding(const FiniteChain& chain, std::size_t source,
                                            const StateSet& target)
{
    std::vector<char> seen(chain.size(), 0);
    std::deque<std::size_t> queue;
    auto visit_successors = [&](std::size_t x) {
        for (std::size_t y = 0; y < chain.size(); ++y)
        {
            if (chain(x, y) > 0.0 && !target.contains(y) && seen[y] == 0)
            {
                seen[y] = 1;
                queue.push_back(y);
            }
        }
    };
    visit_successors(source);
    while (!queue.empty())
    {
        const std::size_t x = queue.front();
        queue.pop_front();
        visit_successors(x);
    }
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < chain.size(); ++y)
    {
        if (seen[y] != 0)
        {
            out.push_back(y);
        }
    }
    return out;
}

std::vector<std::size_t> all_outside(const StateSet& target)
{
    const auto comp = target.complement();
    return {comp.members().begin(), comp.members().end()};
}

}  // namespace

double mgf_weighted_sum(const FiniteChain& chain, const WeightFunction& weight, std::size_t source,
                        const StateSet& target, double r)
{
    require(r > 1.0, "mgf_weighted_sum needs r > 1");
    require(weight.size() == chain.size(), "weight function has wrong dimension");
    const auto active = reachable_avoiding(chain, source, target);
    return first_step_solve(chain, active, weight.values(), weight.values(), r)[source];
}

std::vector<double> mgf_weighted_sums(const FiniteChain& chain, const WeightFunction& weight,
                                      const StateSet& target, double r)
{
    require(r > 1.0, "mgf_weighted_sums needs r > 1");
    require(weight.size() == chain.size(), "weight function has wrong dimension");
    return first_step_solve(chain, all_outside(target), weight.values(), weight.values(), r);
}

std::vector<double> hitting_mgf(const FiniteChain& chain, const StateSet& target, double r)
{
    require(r >= 1.0, "hitting_mgf needs r >= 1");
    std::vector<double> c(chain.size());
    for (std::size_t x = 0; x < chain.size(); ++x)
    {
        c[x] = r * chain.mass(x, target);
    }
    return first_step_solve(chain, all_outside(target), c, c, r);
}

std::vector<double> expected_hitting_time(const FiniteChain& chain, const StateSet& target)
{
    const std::vector<double> ones(chain.size(), 1.0);
    return first_step_solve(chain, all_outside(target), ones, ones, 1.0);
}

std::vector<double> vnorm_distances(const FiniteChain& chain, const WeightFunction& weight,
                                    std::size_t source, std::size_t horizon,
                                    std::span<const double> pi)
{
    require(pi.size() == chain.size() && weight.size() == chain.size(),
            "dimension mismatch in vnorm distance");
    std::vector<double> out;
    out.reserve(horizon);
    std::vector<double> current(chain.size(), 0.0);
    current[source] = 1.0;
    for (std::size_t n = 1; n <= horizon; ++n)
    {
        current = chain.matrix().left_multiply(current);
        out.push_back(simd::weighted_abs_diff(current, pi, weight.values()));
    }
    return out;
}

double vnorm_distance(const FiniteChain& chain, const WeightFunction& weight, std::size_t source,
                      std::size_t n, std::span<const double> pi)
{
    if (n == 0)
    {
        std::vector<double> start(chain.size(), 0.0);
        start[source] = 1.0;
        return simd::weighted_abs_diff(start, pi, weight.values());
    }
    return vnorm_distances(chain, weight, source, n, pi).back();
}

}  // namespace ergo
