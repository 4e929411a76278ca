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

#include "ergo/harris.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ergo/parallel.hpp"

namespace ergo
{

namespace
{

constexpr double kLn10 = 2.30258509299404568402;

void validate(const HarrisInputs& in)
{
    require(in.delta > 0.0 && in.delta <= 1.0, "harris: delta must lie in (0, 1]");
    require(in.lambda > 0.0 && in.lambda < 1.0, "harris: lambda must lie in (0, 1)");
    require(in.b >= 0.0, "harris: b must be nonnegative");
    require(in.n0 >= 1, "harris: N0 must be >= 1");
    require(in.c > 0.0 && in.c <= 1.0, "harris: c must lie in (0, 1]");
    require(in.M_U >= 1.0 && in.M_C >= 1.0, "harris: M_U and M_C must be >= 1");
}

void validate(const HarrisTunables& t)
{
    for (double f : {t.r1, t.r_U, t.r3, t.r_final, t.eta, t.kendall_return})
    {
        require(f > 0.0 && f < 1.0, "harris: rate fractions must lie in (0, 1)");
    }
}

class Tracer
{
public:
    explicit Tracer(std::vector<TraceEntry>& out) : out_(out) {}

    void value(const char* stage, const char* name, LogReal v)
    {
        out_.push_back({stage, name, TraceKind::magnitude, v.log()});
    }
    void rate(const char* stage, const char* name, Rate r)
    {
        out_.push_back({stage, name, TraceKind::rate, r.log_kappa()});
    }
    void count(const char* stage, const char* name, double v)
    {
        out_.push_back({stage, name, TraceKind::count, v});
    }

private:
    std::vector<TraceEntry>& out_;
};

}  // namespace

HarrisInputs verify_hypotheses(const FiniteChain& chain, const MinorizationCertificate& mcert,
                               const DriftCertificate& dcert, std::size_t n0)
{
    require(n0 >= 1, "harris: N0 must be >= 1");
    require(dcert.weight.size() == chain.size() && dcert.set.universe() == chain.size() &&
                mcert.small_set.universe() == chain.size() && mcert.mu.size() == chain.size(),
            "harris: certificate dimensions disagree with the chain");

    const MinorizationCheck m = verify_minorization(chain, mcert);
    if (!m.passed)
    {
        throw HypothesisError("small_set", m.worst_from,
                              "minorization margin " + std::to_string(m.margin) +
                                  ", |mu(U) - 1| = " + std::to_string(m.mu_mass_error));
    }
    if (!(dcert.lambda > 0.0 && dcert.lambda < 1.0) || dcert.b < 0.0 || dcert.set.empty())
    {
        throw HypothesisError("drift", 0, "need 0 < lambda < 1, b >= 0 and a nonempty set");
    }
    const DriftCheck d = verify_drift(chain, dcert);
    if (!d.passed)
    {
        throw HypothesisError("drift", d.worst_state,
                              "PV exceeds lambda V + b 1_C by " + std::to_string(-d.margin));
    }
    const PetitenessCheck p =
        verify_petiteness(chain, {dcert.set, mcert.small_set, n0, 0.0});
    if (!(p.infimum > 0.0))
    {
        throw HypothesisError("petiteness", p.worst_state,
                              "U is not reached within N0 steps from every state of C");
    }

    HarrisInputs out;
    out.delta = mcert.delta;
    out.lambda = dcert.lambda;
    out.b = dcert.b;
    out.n0 = n0;
    out.c = std::min(1.0, p.infimum);
    out.M_U = dcert.weight.max_over(mcert.small_set);
    out.M_C = dcert.weight.max_over(dcert.set);
    return out;
}

HarrisBound harris_constants(const HarrisInputs& in, const HarrisTunables& tun)
{
    validate(in);
    validate(tun);
    HarrisBound out;
    out.inputs = in;
    out.tunables = tun;
    Tracer trace(out.trace);

    const LogReal M_U = LogReal::from_value(in.M_U);
    const LogReal M_C = LogReal::from_value(in.M_C);

    // 1. return times to C
    const double ln_gap = std::log1p(-in.lambda) - std::log(in.lambda);
    const Rate r1 = Rate::from_log_excess(std::log(tun.r1) + ln_gap);
    const LogReal A1 = drift_factor(in.lambda, in.b, r1);
    const GeometricTailBound tail_C{r1, A1 * M_C, A1};
    trace.rate("drift", "r1", r1);
    trace.value("drift", "A", A1);
    trace.value("drift", "M0", tail_C.M0);

    // 2. C -> U
    const TransferInputs to_U{tail_C, LogReal::from_value(in.c), static_cast<double>(in.n0)};
    const TransferRate rate_U = transfer_rate(to_U);
    const Rate r_U = rate_U.rho.scale_excess(tun.r_U);
    const LogReal D_U = transfer_bound(to_U, r_U).D;
    trace.rate("transfer_U", "rho_U", rate_U.rho);
    trace.rate("transfer_U", "r_U", r_U);
    trace.value("transfer_U", "D_U", D_U);

    // 3. split chain, U_0 u U_1 -> U_1
    const LogReal half_delta = LogReal::from_value(in.delta / 2.0);
    const LogReal D_lift =
        LogReal::from_log(D_U.minus(half_delta).log() - std::log1p(-in.delta / 2.0));
    const GeometricTailBound tail_lift{r_U, D_lift * M_U, D_lift};
    const TransferInputs to_atom{tail_lift, LogReal::from_value(atom_access_bound(in.delta)), 1.0};
    const TransferRate rate_a = transfer_rate(to_atom);
    const Rate r3 = rate_a.rho.scale_excess(tun.r3);
    const LogReal D_a3 = transfer_bound(to_atom, r3).D;
    const LogReal B_excess = r3.excess() * D_a3 * M_U;
    trace.value("lift", "D_U_lifted", D_lift);
    trace.value("lift", "c_atom", to_atom.c);
    trace.rate("transfer_atom", "rho_atom", rate_a.rho);
    trace.rate("transfer_atom", "r3", r3);
    trace.value("transfer_atom", "D_atom_r3", D_a3);
    trace.value("atom_mgf", "B_minus_1", B_excess);

    // 4. renewal rate of the atom
    KendallInputs kin;
    kin.beta = in.delta / 2.0;
    kin.B_excess = B_excess;
    kin.r = r3;
    kin.eta_fraction = tun.eta;
    kin.return_fraction = tun.kendall_return;
    const KendallBound krate = kendall_rate(kin);
    trace.count("kendall", "M", krate.drift.M);
    trace.value("kendall", "b_drift", krate.drift.b);
    trace.value("kendall", "M0", krate.tail.M0);
    trace.value("kendall", "c", krate.c);
    trace.rate("kendall", "rho_K", krate.rho);

    // 5. assembly
    const Rate rho_min = std::min({rate_U.rho, rate_a.rho, krate.rho});
    const Rate r = rho_min.scale_excess(tun.r_final);
    const LogReal D_a = transfer_bound(to_atom, r).D;
    out.kendall = kendall_constants(kin, r);
    const LogReal L = out.kendall.L;
    const LogReal rm1 = r.excess();

    const LogReal e1 = (rm1 * D_a).one_plus();
    const LogReal c1 = D_a + M_U * e1;
    const LogReal T = D_a * M_U + M_U * (rm1 * D_a * M_U).one_plus();
    const LogReal geometric = LogReal::from_log(r.kappa() - r.log_excess());
    out.D = c1 + e1 * T * L.one_plus() + T * (D_a + geometric);
    out.rate = r;
    if (!out.D.is_finite() || !std::isfinite(r.log_kappa()))
    {
        throw Error(ErrorCode::numeric_range, "harris: constants are not representable");
    }
    trace.rate("final", "r", r);
    trace.value("final", "D_atom", D_a);
    trace.value("final", "L", L);
    trace.value("final", "c1", c1);
    trace.value("final", "e1", e1);
    trace.value("final", "T_atom", T);
    trace.value("final", "D", out.D);
    return out;
}

HarrisVerification check_harris_bound(const FiniteChain& chain, const WeightFunction& weight,
                                      const HarrisBound& bound, std::size_t horizon,
                                      std::size_t source)
{
    require(weight.size() == chain.size(), "harris: weight dimension mismatch");
    require(source < chain.size(), "harris: source state out of range");
    const std::vector<double> pi = stationary(chain);
    const std::size_t n = chain.size();

    struct PerState
    {
        double worst = logspace::neg_inf;
        std::size_t worst_n = 0;
        bool passed = true;
        std::vector<BoundRow> rows;
    };
    std::vector<PerState> results(n);
    parallel_for(n, [&](std::size_t x) {
        const std::vector<double> dist = vnorm_distances(chain, weight, x, horizon, pi);
        PerState& res = results[x];
        res.rows.reserve(horizon);
        for (std::size_t k = 1; k <= horizon; ++k)
        {
            const double decay = std::exp(std::log(static_cast<double>(k)) + bound.log_kappa());
            const double log_bound = bound.D.log() + std::log(weight(x)) - decay;
            const double d = dist[k - 1];
            res.rows.push_back({k, d, log_bound});
            // distances at rounding level carry no information
            const double excess = d - 1e-13;
            const double ratio = excess > 0.0 ? std::log(excess) - log_bound : logspace::neg_inf;
            if (ratio > res.worst)
            {
                res.worst = ratio;
                res.worst_n = k;
            }
            if (ratio > 0.0) res.passed = false;
        }
    });

    HarrisVerification out;
    out.horizon = horizon;
    out.source = source;
    for (std::size_t x = 0; x < n; ++x)
    {
        out.passed = out.passed && results[x].passed;
        if (results[x].worst > out.worst_log_ratio)
        {
            out.worst_log_ratio = results[x].worst;
            out.worst_state = x;
            out.worst_n = results[x].worst_n;
        }
    }
    out.rows = std::move(results[source].rows);
    return out;
}

HarrisVerification verify_harris_bound(const FiniteChain& chain, const WeightFunction& weight,
                                       const HarrisBound& bound, std::size_t horizon,
                                       std::size_t source)
{
    HarrisVerification report = check_harris_bound(chain, weight, bound, horizon, source);
    if (!report.passed)
    {
        throw Error(ErrorCode::bound_violation,
                    "harris: distance exceeds D V(x) gamma^n at x = " +
                        std::to_string(report.worst_state) +
                        ", n = " + std::to_string(report.worst_n));
    }
    return report;
}

std::string format_log_value(double log_value)
{
    if (log_value == logspace::neg_inf) return "0";
    if (std::isnan(log_value)) return "nan";
    if (log_value == std::numeric_limits<double>::infinity()) return "inf";
    const double l10 = log_value / kLn10;
    double exponent = std::floor(l10);
    double mantissa = std::pow(10.0, l10 - exponent);
    if (mantissa >= 9.99999999999995)
    {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12ge%+.0f", mantissa, exponent);
    return buf;
}

}  // namespace ergo
