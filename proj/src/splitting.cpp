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

#include "ergo/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergo/error.hpp"
#include "ergo/simd.hpp"

namespace ergo
{

namespace
{

constexpr double kClampTolerance = 1e-12;

void require_certificate_shape(std::size_t n, const MinorizationCertificate& cert)
{
    require(cert.small_set.universe() == n, "splitting: small set universe mismatch");
    require(cert.mu.size() == n, "splitting: mu has wrong dimension");
    require(!cert.small_set.empty(), "splitting: small set must be nonempty");
    require(cert.delta > 0.0 && cert.delta <= 1.0, "splitting: delta must lie in (0, 1]");
}

}  // namespace

MinorizationCheck verify_minorization(const FiniteChain& chain, const MinorizationCertificate& cert)
{
    require_certificate_shape(chain.size(), cert);
    MinorizationCheck out;
    double mass_in = 0.0;
    bool support_ok = true;
    for (std::size_t y = 0; y < chain.size(); ++y)
    {
        if (cert.mu[y] < 0.0) support_ok = false;
        if (cert.small_set.contains(y))
        {
            mass_in += cert.mu[y];
        }
        else if (cert.mu[y] != 0.0)
        {
            support_ok = false;
        }
    }
    out.mu_mass_error = std::abs(mass_in - 1.0);
    out.margin = std::numeric_limits<double>::infinity();
    for (std::size_t x : cert.small_set.members())
    {
        for (std::size_t y = 0; y < chain.size(); ++y)
        {
            const double m = chain(x, y) - cert.delta * cert.mu[y];
            if (m < out.margin)
            {
                out.margin = m;
                out.worst_from = x;
                out.worst_to = y;
            }
        }
    }
    out.passed = support_ok && out.mu_mass_error <= kClampTolerance &&
                 out.margin >= -kClampTolerance;
    return out;
}

std::vector<double> split_measure(std::span<const double> lambda,
                                  const MinorizationCertificate& cert)
{
    const std::size_t n = lambda.size();
    require(cert.small_set.universe() == n, "splitting: measure dimension mismatch");
    std::vector<double> out(2 * n, 0.0);
    const double half = cert.delta / 2.0;
    for (std::size_t y = 0; y < n; ++y)
    {
        if (cert.small_set.contains(y))
        {
            out[y] = (1.0 - half) * lambda[y];
            out[n + y] = half * lambda[y];
        }
        else
        {
            out[y] = lambda[y];
        }
    }
    return out;
}

std::vector<double> collapse_levels(std::span<const double> split)
{
    require(split.size() % 2 == 0, "splitting: split vector must have even length");
    const std::size_t n = split.size() / 2;
    std::vector<double> out(n);
    for (std::size_t y = 0; y < n; ++y) out[y] = split[y] + split[n + y];
    return out;
}

StateSet SplitChain::lifted(const StateSet& base_set) const
{
    std::vector<std::size_t> members;
    for (std::size_t x : base_set.members()) members.push_back(level0(x));
    for (std::size_t x : base_set.members())
    {
        if (cert.small_set.contains(x)) members.push_back(level1(x));
    }
    return StateSet(chain.size(), members);
}

SplitChain split_chain(const FiniteChain& base, const MinorizationCertificate& cert,
                       const WeightFunction& weight)
{
    const std::size_t n = base.size();
    require_certificate_shape(n, cert);
    require(weight.size() == n, "splitting: weight dimension mismatch");

    const std::vector<double> mu_star = split_measure(cert.mu, cert);
    Matrix m(2 * n, 2 * n);
    for (std::size_t x = 0; x < n; ++x)
    {
        std::vector<double> row = split_measure(base.row(x), cert);
        if (cert.small_set.contains(x))
        {
            for (std::size_t j = 0; j < 2 * n; ++j)
            {
                row[j] = (2.0 * row[j] - cert.delta * mu_star[j]) / (2.0 - cert.delta);
            }
            bool clamped = false;
            for (std::size_t j = 0; j < 2 * n; ++j)
            {
                if (row[j] < -kClampTolerance)
                {
                    throw Error(ErrorCode::negative_row,
                                "splitting: row of state " + std::to_string(x) + " entry " +
                                    std::to_string(j) + " is " + std::to_string(row[j]));
                }
                if (row[j] < 0.0)
                {
                    row[j] = 0.0;
                    clamped = true;
                }
            }
            if (clamped)
            {
                const double total = simd::sum(row);
                for (double& v : row) v /= total;
            }
        }
        std::copy(row.begin(), row.end(), m.row(x).begin());
        std::copy(mu_star.begin(), mu_star.end(), m.row(n + x).begin());
    }

    std::vector<std::string> labels;
    labels.reserve(2 * n);
    for (int level = 0; level < 2; ++level)
    {
        for (const std::string& s : base.states()) labels.push_back(s + "_" + std::to_string(level));
    }
    std::vector<double> v(2 * n);
    for (std::size_t x = 0; x < n; ++x) v[x] = v[n + x] = weight(x);

    SplitChain out;
    out.base = base;
    out.cert = cert;
    out.chain = FiniteChain(std::move(labels), std::move(m));
    std::vector<std::size_t> atom;
    for (std::size_t x : cert.small_set.members()) atom.push_back(n + x);
    out.atom = StateSet(2 * n, atom);
    out.vhat = WeightFunction(std::move(v));
    return out;
}

SplitChain split_chain(const FiniteChain& base, const MinorizationCertificate& cert)
{
    return split_chain(base, cert, WeightFunction::constant(base.size()));
}

double atom_access_bound(double delta)
{
    require(delta > 0.0 && delta <= 1.0, "splitting: delta must lie in (0, 1]");
    return delta * delta / (2.0 * (2.0 - delta));
}

AtomAccessCheck check_atom_access(const SplitChain& split)
{
    AtomAccessCheck out;
    out.min_access = 1.0;
    for (std::size_t x : split.cert.small_set.members())
    {
        const double a0 = split.chain.mass(split.level0(x), split.atom);
        const double a1 = split.chain.mass(split.level1(x), split.atom);
        out.min_access = std::min({out.min_access, a0, a1});
        out.level1_error = std::max(out.level1_error, std::abs(a1 - split.cert.delta / 2.0));
    }
    out.passed = out.min_access >= atom_access_bound(split.cert.delta) - 1e-12 &&
                 out.level1_error <= 1e-12;
    return out;
}

AtomIncrement atom_increment(const SplitChain& split, std::size_t horizon)
{
    require(horizon >= 1, "splitting: horizon must be >= 1");
    AtomIncrement out;
    out.probs = hitting_law(split.chain, split.alpha(), split.atom, horizon).probs;
    if (std::abs(out.probs[0] - split.cert.delta / 2.0) > 1e-12)
    {
        throw Error(ErrorCode::hypothesis_fail, "splitting: atom self-transition differs from delta/2");
    }
    double total = 0.0;
    for (double p : out.probs) total += p;
    out.tail = std::max(0.0, 1.0 - total);
    return out;
}

RegenerativeSequences regenerative_sequences(const SplitChain& split, std::span<const double> g,
                                             std::size_t horizon)
{
    const std::size_t n2 = split.chain.size();
    require(g.size() == n2, "splitting: test function dimension mismatch");
    require(horizon >= 1, "splitting: horizon must be >= 1");
    RegenerativeSequences out;
    out.horizon = horizon;
    out.first_entrance = Matrix(n2, horizon);
    for (std::size_t x = 0; x < n2; ++x)
    {
        const HittingLaw law = hitting_law(split.chain, x, split.atom, horizon);
        std::copy(law.probs.begin(), law.probs.end(), out.first_entrance.row(x).begin());
    }

    std::vector<double> state(n2, 0.0);
    state[split.alpha()] = 1.0;
    out.u.push_back(1.0);
    std::vector<double> walk = state;
    for (std::size_t k = 1; k <= horizon; ++k)
    {
        walk = split.chain.matrix().left_multiply(walk);
        double on_atom = 0.0;
        for (std::size_t a : split.atom.members()) on_atom += walk[a];
        out.u.push_back(on_atom);
    }

    std::vector<double> taboo = split.chain.matrix().left_multiply(state);
    for (std::size_t k = 1; k <= horizon; ++k)
    {
        if (k > 1) taboo = taboo_step(split.chain, split.atom, taboo);
        out.taboo.push_back(simd::dot(taboo, g));
    }
    return out;
}

RegenerativeCheck regenerative_check(const SplitChain& split, std::size_t n,
                                     const StateSet& target)
{
    require(n >= 1, "splitting: n must be >= 1");
    const std::size_t n2 = split.chain.size();
    require(target.universe() == n2, "splitting: target universe mismatch");
    std::vector<double> g(n2, 0.0);
    for (std::size_t y : target.members()) g[y] = 1.0;

    const RegenerativeSequences seq = regenerative_sequences(split, g, n);
    const Matrix direct = n_step(split.chain, n);
    const Matrix avoiding = taboo_kernel(split.chain, split.atom, n);

    RegenerativeCheck out;
    for (std::size_t x = 0; x < n2; ++x)
    {
        double lhs = 0.0;
        double rhs = 0.0;
        for (std::size_t y : target.members())
        {
            lhs += direct(x, y);
            rhs += avoiding(x, y);
        }
        for (std::size_t j = 1; j < n; ++j)
        {
            double visit = 0.0;
            for (std::size_t k = 1; k <= j; ++k)
            {
                visit += seq.first_entrance(x, k - 1) * seq.u[j - k];
            }
            rhs += visit * seq.taboo[n - j - 1];
        }
        const double residual = std::abs(lhs - rhs);
        if (residual > out.residual)
        {
            out.residual = residual;
            out.worst_source = x;
        }
    }
    out.passed = out.residual < 1e-10;
    return out;
}

InvariantReport invariant_identities(const SplitChain& split, std::span<const double> g,
                                     std::size_t max_terms)
{
    const std::size_t n2 = split.chain.size();
    require(g.size() == n2, "splitting: test function dimension mismatch");
    InvariantReport out;

    const std::vector<double> pi = stationary(split.chain);
    double pi_alpha = 0.0;
    for (std::size_t a : split.atom.members()) pi_alpha += pi[a];
    const double mean_return = expected_hitting_time(split.chain, split.atom)[split.alpha()];
    out.kac_error = std::abs(pi_alpha * mean_return - 1.0);

    std::vector<double> scaled(g.begin(), g.end());
    double ratio = 0.0;
    for (std::size_t i = 0; i < n2; ++i) ratio = std::max(ratio, std::abs(g[i]) / split.vhat(i));
    if (ratio > 1.0)
    {
        out.g_scale = 1.0 / ratio;
        for (double& v : scaled) v *= out.g_scale;
    }
    double g_max = 0.0;
    for (double v : scaled) g_max = std::max(g_max, std::abs(v));

    // The taboo vector at step k has total mass P_alpha{tau >= k}, so one
    // propagation yields both t_g(k) and the survival sum that bounds the
    // remainder: sum_{k>K} P(tau >= k) = E tau - sum_{k<=K} P(tau >= k).
    std::vector<double> start(n2, 0.0);
    start[split.alpha()] = 1.0;
    std::vector<double> taboo = split.chain.matrix().left_multiply(start);
    double series = 0.0;
    double head = 0.0;
    for (std::size_t k = 1; k <= max_terms; ++k)
    {
        if (k > 1) taboo = taboo_step(split.chain, split.atom, taboo);
        const double alive = simd::sum(taboo);
        series += simd::dot(taboo, scaled);
        head += alive;
        out.terms = k;
        if (alive < 1e-18) break;
    }
    out.series_tail = pi_alpha * g_max * std::max(0.0, mean_return - head);
    out.series_gap = std::abs(simd::dot(pi, scaled) - pi_alpha * series);

    const std::vector<double> marginal = collapse_levels(pi);
    const std::vector<double> pushed = split.base.matrix().left_multiply(marginal);
    const std::vector<double> base_pi = stationary(split.base);
    for (std::size_t y = 0; y < marginal.size(); ++y)
    {
        out.marginal_error = std::max(out.marginal_error, std::abs(pushed[y] - marginal[y]));
        out.marginal_vs_base = std::max(out.marginal_vs_base, std::abs(base_pi[y] - marginal[y]));
    }
    out.passed = out.kac_error <= 1e-10 && out.series_gap <= out.series_tail + 1e-8 &&
                 out.marginal_error <= 1e-10 && out.marginal_vs_base <= 1e-10;
    return out;
}

SplitDrift measure_split_drift(const SplitChain& split, const StateSet& drift_set, double lambda,
                               double b)
{
    const std::size_t n = split.base_size();
    require(drift_set.universe() == n, "splitting: drift set universe mismatch");
    const std::vector<double> pv = split.chain.matrix().apply(split.vhat.values());
    auto reachable = [&](std::size_t i) { return i < n || split.cert.small_set.contains(i - n); };
    auto in_set = [&](std::size_t i) { return drift_set.contains(i < n ? i : i - n); };

    SplitDrift out;
    bool base_ok = true;
    for (std::size_t i = 0; i < 2 * n; ++i)
    {
        if (!reachable(i)) continue;
        const double v = split.vhat(i);
        if (pv[i] > lambda * v + (in_set(i) ? b : 0.0) + 1e-12 * std::max(1.0, pv[i]))
        {
            base_ok = false;
        }
        if (!in_set(i)) out.lambda = std::max(out.lambda, pv[i] / v);
    }
    for (std::size_t i = 0; i < 2 * n; ++i)
    {
        if (reachable(i) && in_set(i))
        {
            out.b = std::max(out.b, pv[i] - out.lambda * split.vhat(i));
        }
    }
    out.base_constants_hold = base_ok;
    return out;
}

}  // namespace ergo
