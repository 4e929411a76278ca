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

#include "ergo/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ergo/error.hpp"

namespace ergo
{

namespace
{

constexpr double kGuardBand = 1e-9;

// c below this is indistinguishable from -ln(1 - c) at double precision; the
// substitution ell -> c is a lower bound.
constexpr double kSmallLogC = -30.0;

}  // namespace

LogReal drift_factor(double lambda, double b, Rate r)
{
    require(lambda > 0.0 && lambda < 1.0, "drift: lambda must lie in (0, 1)");
    require(b >= 0.0, "drift: b must be nonnegative");
    const double ln_lambda_r = std::log(lambda) + r.kappa();
    if (!(ln_lambda_r < 0.0))
    {
        throw Error(ErrorCode::rate_range, "drift: rate r must satisfy r < 1/lambda");
    }
    const double ln_num = b > 0.0 ? logspace::log1p_exp(r.kappa() + std::log(b)) : 0.0;
    return LogReal::from_log(ln_num - logspace::log1m_exp(ln_lambda_r));
}

double drift_mgf_bound(double lambda, double b, double r, double vx)
{
    require(vx >= 1.0, "drift: V(x) must be >= 1");
    if (!(r > 1.0))
    {
        throw Error(ErrorCode::rate_range, "drift: rate r must exceed 1");
    }
    return drift_factor(lambda, b, Rate::from_value(r)).value() * vx;
}

DriftCheck verify_drift(const FiniteChain& chain, const DriftCertificate& cert)
{
    require(cert.weight.size() == chain.size(), "drift: weight size mismatch");
    require(cert.set.universe() == chain.size(), "drift: set universe mismatch");
    const std::vector<double> pv = chain.matrix().apply(cert.weight.values());
    DriftCheck out;
    out.margin = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < chain.size(); ++x)
    {
        const double rhs = cert.lambda * cert.weight(x) + (cert.set.contains(x) ? cert.b : 0.0);
        const double margin = rhs - pv[x];
        if (margin < out.margin)
        {
            out.margin = margin;
            out.worst_state = x;
        }
    }
    const double scale = std::max(1.0, *std::max_element(pv.begin(), pv.end()));
    out.passed = out.margin >= -1e-12 * scale;
    return out;
}

PetitenessCheck verify_petiteness(const FiniteChain& chain, const PetitenessCertificate& cert)
{
    require(cert.n0 >= 1, "petiteness: N0 must be >= 1");
    require(cert.source.universe() == chain.size() && cert.target.universe() == chain.size(),
            "petiteness: set universe mismatch");
    PetitenessCheck out;
    out.infimum = 1.0;
    for (std::size_t x : cert.source.members())
    {
        const double hit = 1.0 - hitting_tail(chain, x, cert.target, cert.n0);
        if (hit < out.infimum)
        {
            out.infimum = hit;
            out.worst_state = x;
        }
    }
    out.passed = out.infimum >= cert.c - 1e-12;
    return out;
}

GeometricTailBound drift_tail_bound(double lambda, double b, Rate r, double sup_v_on_set)
{
    require(sup_v_on_set >= 1.0, "drift: sup of V over C must be >= 1");
    const LogReal a = drift_factor(lambda, b, r);
    return {r, a * LogReal::from_value(sup_v_on_set), a};
}

TransferRate transfer_rate(const TransferInputs& in)
{
    const GeometricTailBound& t = in.tail;
    require(t.M0.log() >= 0.0, "transfer: M0 must be >= 1");
    require(t.initial_factor.log() >= 0.0, "transfer: initial factor must be >= 1");
    require(in.n0 >= 1.0, "transfer: N0 must be >= 1");
    require(!in.c.is_zero() && in.c.log() <= 1e-15, "transfer: c must lie in (0, 1]");
    if (!t.M0.is_finite() || !t.initial_factor.is_finite() || !std::isfinite(t.r.log_kappa()))
    {
        throw Error(ErrorCode::numeric_range, "transfer: inputs out of representable range");
    }

    TransferRate out;
    out.log_r1_block = logspace::log1p_exp(t.r.log_excess() + t.M0.log());
    const double ln_ln_r1_block = logspace::log_log1p(t.r.log_excess() + t.M0.log());

    double log_a = 0.0;
    if (in.c.log() >= 0.0)
    {
        out.certain = true;
        out.log_ell = std::numeric_limits<double>::infinity();
    }
    else
    {
        out.log_ell = in.c.log() > kSmallLogC ? std::log(-std::log1p(-in.c.value())) : in.c.log();
        log_a = out.log_ell - logspace::add(std::log(in.n0) + ln_ln_r1_block, out.log_ell);
    }
    const double log_kappa_crit = log_a + t.r.log_kappa();
    if (!std::isfinite(log_kappa_crit))
    {
        throw Error(ErrorCode::no_contraction, "transfer: contraction rate is not representable");
    }
    out.critical = Rate::from_log_kappa(log_kappa_crit);
    out.rho = Rate::from_log_kappa(log_kappa_crit + std::log1p(-kGuardBand));
    return out;
}

TransferBound transfer_bound(const TransferInputs& in, Rate r2)
{
    TransferBound out;
    out.rate = transfer_rate(in);
    out.r2 = r2;
    if (!(std::isfinite(r2.log_kappa())))
    {
        throw Error(ErrorCode::rate_range, "transfer: r2 must exceed 1");
    }
    if (r2 > out.rate.rho)
    {
        throw Error(ErrorCode::r2_too_large, "transfer: r2 exceeds the certified rate rho");
    }
    const GeometricTailBound& t = in.tail;

    // ln(1 - theta) with ln theta = -ell (1 - kappa2 / kappa_crit)
    double log_gap = 0.0;
    if (!out.rate.certain)
    {
        const double ln_one_minus_t =
            logspace::log1m_exp(r2.log_kappa() - out.rate.critical.log_kappa());
        log_gap = logspace::log_one_minus_exp_neg(out.rate.log_ell + ln_one_minus_t);
    }
    out.log_contraction_gap = log_gap;

    const double ln_r2m1 = r2.log_excess();
    const double ln_block_excess = ln_r2m1 + t.M0.log();
    const double ln_ln_block = logspace::log_log1p(ln_block_excess);
    const double ln_series =
        logspace::log_expm1(std::log(in.n0) + ln_ln_block) - ln_block_excess;

    const double ln_core = t.M0.log() + ln_series - log_gap;
    const double ln_lead = logspace::log1p_exp(ln_r2m1 + t.initial_factor.log());
    out.D = LogReal::from_log(logspace::add(t.initial_factor.log(), ln_lead + ln_core));
    if (!out.D.is_finite())
    {
        throw Error(ErrorCode::numeric_range, "transfer: D is not representable");
    }
    return out;
}

TransferResult transfer_bound(double r1, double M0, double c, std::size_t n0, double r2,
                              double initial_factor)
{
    require(r1 > 1.0, "transfer: r1 must exceed 1");
    require(r2 > 1.0, "transfer: r2 must exceed 1");
    require(c > 0.0 && c <= 1.0, "transfer: c must lie in (0, 1]");
    TransferInputs in{{Rate::from_value(r1), LogReal::from_value(M0),
                       LogReal::from_value(initial_factor)},
                      LogReal::from_value(c),
                      static_cast<double>(n0)};
    const TransferBound b = transfer_bound(in, Rate::from_value(r2));
    return {b.rate.rho.value(), b.D.value()};
}

}  // namespace ergo
