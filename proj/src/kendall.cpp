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

#include "ergo/kendall.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ergo/error.hpp"

namespace ergo
{

namespace
{

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kTailRateFloor = 1e-6;

void require_fraction(double f, const char* what)
{
    require(f > 0.0 && f < 1.0, std::string("kendall: ") + what + " must lie in (0, 1)");
}

}  // namespace

BivariateChain bivariate_chain(const IncrementDistribution& p)
{
    const std::size_t L = p.support();
    require(L >= 1, "kendall: increment distribution must be nonempty");
    BivariateChain out;
    out.increments = p;
    out.support = L;
    Matrix m(L * L, L * L);
    for (std::size_t a = 1; a <= L; ++a)
    {
        for (std::size_t b = 1; b <= L; ++b)
        {
            const std::size_t from = out.index(a, b);
            if (a > 1 && b > 1)
            {
                m(from, out.index(a - 1, b - 1)) = 1.0;
            }
            else if (a == 1 && b > 1)
            {
                for (std::size_t k = 1; k <= L; ++k) m(from, out.index(k, b - 1)) = p(k);
            }
            else if (a > 1 && b == 1)
            {
                for (std::size_t k = 1; k <= L; ++k) m(from, out.index(a - 1, k)) = p(k);
            }
            else
            {
                for (std::size_t i = 1; i <= L; ++i)
                {
                    for (std::size_t j = 1; j <= L; ++j) m(from, out.index(i, j)) = p(i) * p(j);
                }
            }
        }
    }
    std::vector<std::string> labels;
    labels.reserve(L * L);
    for (std::size_t i = 0; i < L * L; ++i)
    {
        const auto [a, b] = out.coords(i);
        labels.push_back("(" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    out.chain = FiniteChain(std::move(labels), std::move(m));
    return out;
}

double lyapunov_value(std::size_t a, std::size_t b, double r)
{
    require(a >= 1 && b >= 1, "kendall: coordinates start at 1");
    require(r > 1.0, "kendall: r must exceed 1");
    return (std::pow(r, static_cast<double>(a - 1)) + std::pow(r, static_cast<double>(b - 1))) /
           2.0;
}

WeightFunction lyapunov_weights(const BivariateChain& biv, double r)
{
    std::vector<double> v(biv.chain.size());
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        const auto [a, b] = biv.coords(i);
        v[i] = lyapunov_value(a, b, r);
    }
    return WeightFunction(std::move(v));
}

BivariateDrift bivariate_drift_level(LogReal S_excess, Rate r, double eta_fraction)
{
    require_fraction(eta_fraction, "eta fraction");
    const double ln_rm1 = r.log_excess();
    require(S_excess.log() >= ln_rm1, "kendall: B must be >= r");

    BivariateDrift out;
    // (S - eta r) / (eta r - 1) with eta r - 1 = f (r - 1)
    const double ln_etar_m1 = std::log(eta_fraction) + ln_rm1;
    const double ln_ratio = logspace::sub(S_excess.log(), ln_etar_m1) - ln_etar_m1;
    if (ln_ratio > 0.0)
    {
        const double level = std::exp(std::log(ln_ratio) - r.log_kappa()) + 1.0;
        if (!std::isfinite(level))
        {
            throw Error(ErrorCode::numeric_range, "kendall: drift level M overflows");
        }
        out.M = std::max(1.0, std::ceil(level));
    }
    const double ln_rM = out.M > 1.0 ? std::exp(std::log(out.M - 1.0) + r.log_kappa()) : 0.0;
    const double ln_S = logspace::log1p_exp(S_excess.log());
    out.b = LogReal::from_log(std::max(kLn2 + ln_S, logspace::add(ln_S, ln_rM)) - kLn2 -
                              r.kappa());
    out.sup_v = LogReal::from_log(logspace::log1p_exp(ln_rM) - kLn2);
    return out;
}

StateSet bivariate_drift_set(const BivariateChain& biv, std::size_t M)
{
    std::vector<std::size_t> members;
    const std::size_t top = std::min(M, biv.support);
    for (std::size_t k = 1; k <= top; ++k)
    {
        members.push_back(biv.index(1, k));
        if (k > 1) members.push_back(biv.index(k, 1));
    }
    std::sort(members.begin(), members.end());
    return StateSet(biv.chain.size(), members);
}

BivariateDriftCertificate bivariate_drift(const BivariateChain& biv, double r, double eta)
{
    require(r > 1.0, "kendall: r must exceed 1");
    if (!(eta > 1.0 / r && eta < 1.0))
    {
        throw Error(ErrorCode::eta_range, "kendall: eta must lie in (1/r, 1)");
    }
    const double S = increment_mgf(biv.increments, r);
    const double f = eta_fraction_of(eta, r);
    const BivariateDrift level = bivariate_drift_level(LogReal::from_value(S - 1.0),
                                                       Rate::from_value(r), f);
    BivariateDriftCertificate out;
    require(level.M < 1e15, "kendall: drift level M too large for an explicit chain");
    out.M = static_cast<std::size_t>(level.M);
    out.set = bivariate_drift_set(biv, out.M);
    out.b_drift = level.b.value();
    out.certificate = {lyapunov_weights(biv, r), eta, out.b_drift, out.set};
    const DriftCheck check = verify_drift(biv.chain, out.certificate);
    if (!check.passed)
    {
        const auto [a, b] = biv.coords(check.worst_state);
        throw Error(ErrorCode::drift_violation,
                    "kendall: drift fails at (" + std::to_string(a) + "," + std::to_string(b) +
                        ") by " + std::to_string(-check.margin));
    }
    return out;
}

LogReal petiteness_bound(double beta, double M)
{
    require(beta > 0.0 && beta <= 1.0, "kendall: beta must lie in (0, 1]");
    require(M >= 1.0, "kendall: M must be >= 1");
    return LogReal::from_log(std::max(M, 2.0) * std::log(beta));
}

BivariatePetiteness bivariate_petiteness(const BivariateChain& biv, std::size_t M)
{
    require(M >= 1, "kendall: M must be >= 1");
    BivariatePetiteness out;
    const double p1 = biv.increments(1);
    out.certified = p1 > 0.0 ? petiteness_bound(p1, static_cast<double>(M)).value() : 0.0;
    const StateSet meet(biv.chain.size(), {biv.index(1, 1)});
    const StateSet set = bivariate_drift_set(biv, M);
    out.exact = 1.0;
    for (std::size_t x : set.members())
    {
        out.exact = std::min(out.exact, 1.0 - hitting_tail(biv.chain, x, meet, M));
    }
    if (out.exact < out.certified - 1e-12)
    {
        throw Error(ErrorCode::hypothesis_fail, "kendall: exact petiteness below p(1)^M");
    }
    return out;
}

double eta_fraction_of(double eta, double r)
{
    require(r > 1.0, "kendall: r must exceed 1");
    if (!(eta > 1.0 / r && eta < 1.0))
    {
        throw Error(ErrorCode::eta_range, "kendall: eta must lie in (1/r, 1)");
    }
    return (eta * r - 1.0) / (r - 1.0);
}

KendallBound kendall_rate(const KendallInputs& in)
{
    require(in.beta > 0.0 && in.beta <= 1.0, "kendall: beta must lie in (0, 1]");
    require_fraction(in.eta_fraction, "eta fraction");
    require_fraction(in.return_fraction, "return-rate fraction");
    if (!std::isfinite(in.r.log_kappa()))
    {
        throw Error(ErrorCode::rate_range, "kendall: r must be a finite rate above 1");
    }

    KendallBound out;
    out.inputs = in;
    const double ln_rm1 = in.r.log_excess();
    out.log_one_minus_eta = std::log1p(-in.eta_fraction) + ln_rm1 - in.r.kappa();
    out.eta = -std::expm1(out.log_one_minus_eta);
    out.drift = bivariate_drift_level(in.B_excess, in.r, in.eta_fraction);

    // r' - 1 = g (1/eta - 1), and 1 - eta r' = (1 - eta)(1 - g)
    const double ln_eta = logspace::log1m_exp(out.log_one_minus_eta);
    out.return_rate =
        Rate::from_log_excess(std::log(in.return_fraction) + out.log_one_minus_eta - ln_eta);
    const double ln_gap = out.log_one_minus_eta + std::log1p(-in.return_fraction);
    const LogReal initial = LogReal::from_log(
        logspace::log1p_exp(out.return_rate.kappa() + out.drift.b.log()) - ln_gap);
    out.tail = {out.return_rate, initial * out.drift.sup_v, initial};

    out.c = petiteness_bound(in.beta, out.drift.M);
    out.rate = transfer_rate({out.tail, out.c, out.drift.M});
    out.rho = out.rate.rho;
    return out;
}

KendallBound kendall_constants(const KendallInputs& in, Rate r2)
{
    KendallBound out = kendall_rate(in);
    const TransferBound t = transfer_bound({out.tail, out.c, out.drift.M}, r2);
    out.r2 = r2;
    out.D = t.D;

    // L = r2/(r2-1) * [1 + (r2-1) D (1 + (B-1)/(r-1)) / 2]
    const double ln_r2m1 = r2.log_excess();
    const double ln_weight =
        logspace::log1p_exp(in.B_excess.log() - in.r.log_excess()) - kLn2;
    const double ln_bracket = logspace::log1p_exp(ln_r2m1 + out.D.log() + ln_weight);
    out.L = LogReal::from_log(r2.kappa() - ln_r2m1 + ln_bracket);
    if (!out.L.is_finite())
    {
        throw Error(ErrorCode::numeric_range, "kendall: L is not representable");
    }
    return out;
}

KendallBound kendall_rate(double beta, double B, double r, double eta)
{
    require(r > 1.0, "kendall: r must exceed 1");
    require(B >= r, "kendall: B must be >= r");
    KendallInputs in;
    in.beta = beta;
    in.B_excess = LogReal::from_value(B - 1.0);
    in.r = Rate::from_value(r);
    in.eta_fraction = eta_fraction_of(eta, r);
    return kendall_rate(in);
}

KendallBound kendall_constants(double beta, double B, double r, double eta, double r2)
{
    require(r > 1.0, "kendall: r must exceed 1");
    require(B >= r, "kendall: B must be >= r");
    if (!(r2 > 1.0))
    {
        throw Error(ErrorCode::rate_range, "kendall: r2 must exceed 1");
    }
    KendallInputs in;
    in.beta = beta;
    in.B_excess = LogReal::from_value(B - 1.0);
    in.r = Rate::from_value(r);
    in.eta_fraction = eta_fraction_of(eta, r);
    return kendall_constants(in, Rate::from_value(r2));
}

LogReal kendall_delay_bound(const KendallBound& k, std::size_t n)
{
    const double n1 = static_cast<double>(n) + 1.0;
    return LogReal::from_log(k.D.log() + n1 * k.r2.kappa() - kLn2 - k.r2.log_excess());
}

LogReal kendall_delay_bound_tight(const KendallBound& k, std::size_t n)
{
    const double ln_v = logspace::log1p_exp(static_cast<double>(n) * k.inputs.r.kappa()) - kLn2;
    return LogReal::from_log(logspace::log1p_exp(k.r2.log_excess() + k.D.log() + ln_v));
}

KendallVerification kendall_verify(const IncrementDistribution& p, const KendallBound& bound,
                                   std::size_t horizon)
{
    KendallVerification out;
    out.horizon = horizon;
    out.L = bound.L;

    // r2^n = e^{n kappa2} keeps rates within an ulp of 1 meaningful
    const double kappa2 = bound.r2.kappa();
    const RenewalSequence u = renewal_sequence(p, horizon);
    const StationaryDelay e = stationary_delay(p);
    for (std::size_t n = 1; n <= horizon; ++n)
    {
        out.partial_sum += std::abs(u(n) - e.pi1) * std::exp(static_cast<double>(n) * kappa2);
    }

    // |u(n) - pi| <= P{T > n}, and for r' >= r2
    //   sum_{n>N} P{T > n} r2^n <= E[r'^T ; T > N + 1] / (r' - 1),
    // evaluated from the surviving mass after N + 1 steps without cancellation.
    const double r_tail = std::max(bound.r2.value(), 1.0 + kTailRateFloor);
    const BivariateChain biv = bivariate_chain(p);
    const std::size_t meet_index = biv.index(1, 1);
    const StateSet meet(biv.chain.size(), {meet_index});
    std::vector<double> alive(biv.chain.size(), 0.0);
    for (std::size_t m = 1; m < p.support(); ++m)
    {
        alive[biv.index(1, m + 1)] = e.delay(m);
    }
    for (std::size_t t = 1; t <= horizon + 1; ++t)
    {
        alive = taboo_step(biv.chain, meet, alive);
        alive[meet_index] = 0.0;
    }
    const std::vector<double> mgf = hitting_mgf(biv.chain, meet, r_tail);
    double remaining = 0.0;
    for (std::size_t y = 0; y < alive.size(); ++y)
    {
        remaining += alive[y] * mgf[y];
    }
    out.tail = remaining * std::pow(r_tail, static_cast<double>(horizon + 1)) / (r_tail - 1.0);
    out.total = out.partial_sum + out.tail;
    out.passed = out.total == 0.0 || std::log(out.total) <= bound.L.log();
    return out;
}

}  // namespace ergo
