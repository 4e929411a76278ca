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

#include "ergo/run.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ergo/error.hpp"
#include "ergo/harris.hpp"
#include "ergo/kendall.hpp"
#include "ergo/montecarlo.hpp"
#include "ergo/renewal.hpp"
#include "ergo/splitting.hpp"

namespace ergo
{

namespace
{

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// e^{log_value} as a plain number while it fits, scientific text beyond.
std::string magnitude_text(double log_value)
{
    return std::abs(log_value) < 700.0 ? num(std::exp(log_value)) : format_log_value(log_value);
}

class Builder
{
public:
    Builder(RunReport& report, ProblemKind kind) : report_(report)
    {
        report_.kind = kind;
        out_.SetDoublePrecision(17);
        out_ << YAML::BeginMap;
        out_ << YAML::Key << "kind" << YAML::Value << std::string(to_string(kind));
        report_.csv = "n,exact_distance,bound_value,margin\n";
    }

    YAML::Emitter& yaml() { return out_; }

    void begin(const char* key)
    {
        out_ << YAML::Key << key << YAML::Value << YAML::BeginMap;
    }
    void end() { out_ << YAML::EndMap; }

    template <typename T>
    void put(const char* key, const T& value)
    {
        out_ << YAML::Key << key << YAML::Value << value;
    }

    void magnitude(const char* stage, const char* key, LogReal v)
    {
        out_ << YAML::Key << key << YAML::Value << YAML::BeginMap;
        out_ << YAML::Key << "log" << YAML::Value << v.log();
        out_ << YAML::Key << "value" << YAML::Value << magnitude_text(v.log());
        out_ << YAML::EndMap;
        trace(stage, key, magnitude_text(v.log()));
    }

    void rate(const char* stage, const char* key, Rate r)
    {
        out_ << YAML::Key << key << YAML::Value << YAML::BeginMap;
        out_ << YAML::Key << "log_log" << YAML::Value << r.log_kappa();
        out_ << YAML::Key << "excess" << YAML::Value << magnitude_text(r.log_excess());
        out_ << YAML::EndMap;
        trace(stage, key, "1 + " + magnitude_text(r.log_excess()));
    }

    void scalar(const char* stage, const char* key, double v)
    {
        put(key, v);
        trace(stage, key, num(v));
    }

    void trace(const std::string& stage, const std::string& name, const std::string& value)
    {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-14s %-16s %s\n", stage.c_str(), name.c_str(),
                      value.c_str());
        report_.trace += buf;
    }

    void check(std::string name, bool passed, std::string detail)
    {
        report_.checks.push_back({std::move(name), passed, std::move(detail)});
    }

    void row(std::size_t n, double distance, double log_bound)
    {
        std::string margin;
        if (std::abs(log_bound) < 700.0 || log_bound == logspace::neg_inf)
        {
            margin = num(std::exp(log_bound) - distance);
        }
        else if (log_bound > 0.0)
        {
            margin = distance > 0.0 ? format_log_value(logspace::sub(log_bound, std::log(distance)))
                                    : format_log_value(log_bound);
        }
        else
        {
            margin = num(-distance);
        }
        report_.csv += std::to_string(n) + "," + num(distance) + "," + magnitude_text(log_bound) +
                       "," + margin + "\n";
    }

    void finish()
    {
        bool all = true;
        out_ << YAML::Key << "verifications" << YAML::Value << YAML::BeginSeq;
        for (const auto& c : report_.checks)
        {
            out_ << YAML::BeginMap;
            out_ << YAML::Key << "name" << YAML::Value << c.name;
            out_ << YAML::Key << "passed" << YAML::Value << c.passed;
            out_ << YAML::Key << "detail" << YAML::Value << c.detail;
            out_ << YAML::EndMap;
            all = all && c.passed;
        }
        out_ << YAML::EndSeq;
        out_ << YAML::Key << "passed" << YAML::Value << all;
        out_ << YAML::EndMap;
        report_.passed = all;
        report_.yaml = std::string(out_.c_str()) + "\n";
    }

private:
    RunReport& report_;
    YAML::Emitter out_;
};

std::string with_z(const Agreement& a)
{
    return "exact " + num(a.exact) + ", estimate " + num(a.estimate) + ", se " +
           num(a.std_error) + ", z " + num(a.z);
}

void trace_entries(Builder& b, const std::vector<TraceEntry>& trace)
{
    b.yaml() << YAML::Key << "trace" << YAML::Value << YAML::BeginSeq;
    for (const auto& t : trace)
    {
        b.yaml() << YAML::BeginMap;
        b.yaml() << YAML::Key << "stage" << YAML::Value << t.stage;
        b.yaml() << YAML::Key << "name" << YAML::Value << t.name;
        std::string shown;
        switch (t.kind)
        {
            case TraceKind::magnitude:
                b.yaml() << YAML::Key << "log" << YAML::Value << t.log_value;
                shown = magnitude_text(t.log_value);
                break;
            case TraceKind::rate:
                b.yaml() << YAML::Key << "log_log" << YAML::Value << t.log_value;
                shown = "1 + " + magnitude_text(Rate::from_log_kappa(t.log_value).log_excess());
                break;
            case TraceKind::count:
                b.yaml() << YAML::Key << "count" << YAML::Value << t.log_value;
                shown = num(t.log_value);
                break;
        }
        b.yaml() << YAML::Key << "value" << YAML::Value << shown;
        b.yaml() << YAML::EndMap;
        b.trace(t.stage, t.name, shown);
    }
    b.yaml() << YAML::EndSeq;
}

void run_renewal(const ProblemSpec& spec, std::size_t horizon, Builder& b)
{
    const IncrementDistribution p(*spec.increment);
    const double r2 = spec.tunables.r2.value_or(1.01);
    const RenewalSequence u = renewal_sequence(p, horizon);
    const StationaryDelay e = stationary_delay(p);
    const CouplingTailReport ct = coupling_tail_check(p, horizon, r2);

    b.begin("constants");
    b.scalar("renewal", "mean", p.mean());
    b.scalar("renewal", "pi1", e.pi1);
    b.scalar("renewal", "r2", r2);
    b.scalar("renewal", "weighted_partial_sum", ct.weighted_partial_sum);
    b.end();
    b.yaml() << YAML::Key << "u" << YAML::Value << YAML::Flow << u.values;
    b.yaml() << YAML::Key << "stationary_delay" << YAML::Value << YAML::Flow
             << std::vector<double>(e.delay.probs().begin(), e.delay.probs().end());

    b.check("coupling_inequality", ct.holds,
            "min margin " + num(ct.worst_margin) + " at n = " + std::to_string(ct.worst_n));
    for (std::size_t n = 0; n <= horizon; ++n)
    {
        b.row(n, ct.deviation[n], std::log(ct.coupling_tail[n]));
    }
}

void run_kendall(const ProblemSpec& spec, std::size_t horizon, Builder& b)
{
    const IncrementDistribution p(*spec.increment);
    const double r = *spec.tunables.r;
    const double eta = spec.tunables.eta.value_or((1.0 / r + 1.0) / 2.0);
    const double beta = p(1);
    const double B = increment_mgf(p, r);

    const BivariateChain biv = bivariate_chain(p);
    const BivariateDriftCertificate drift = bivariate_drift(biv, r, eta);
    const DriftCheck dcheck = verify_drift(biv.chain, drift.certificate);
    const BivariatePetiteness pet = bivariate_petiteness(biv, drift.M);

    const KendallBound rate = kendall_rate(beta, B, r, eta);
    const double rho = rate.rho.value();
    const double r2 = spec.tunables.r2.value_or(1.0 + 0.9 * (rho - 1.0));
    const KendallBound k = kendall_constants(beta, B, r, eta, r2);
    const KendallVerification v = kendall_verify(p, k, horizon);

    b.begin("constants");
    b.scalar("input", "r", r);
    b.scalar("input", "B", B);
    b.scalar("input", "beta", beta);
    b.scalar("input", "eta", eta);
    b.scalar("drift", "M", k.drift.M);
    b.magnitude("drift", "b_drift", k.drift.b);
    b.rate("return", "r_prime", k.return_rate);
    b.magnitude("return", "M0", k.tail.M0);
    b.magnitude("petiteness", "c", k.c);
    b.rate("transfer", "rho", k.rho);
    b.rate("transfer", "r2", k.r2);
    b.magnitude("transfer", "D", k.D);
    b.magnitude("final", "L", k.L);
    b.end();

    b.begin("exact");
    b.put("M", drift.M);
    b.put("b_drift", drift.b_drift);
    b.put("petiteness_certified", pet.certified);
    b.put("petiteness_exact", pet.exact);
    b.put("partial_sum", v.partial_sum);
    b.put("tail", v.tail);
    b.put("total", v.total);
    b.end();

    b.check("bivariate_drift", dcheck.passed, "worst margin " + num(dcheck.margin));
    b.check("petiteness", pet.exact >= pet.certified - 1e-12,
            "exact " + num(pet.exact) + " >= certified " + num(pet.certified));

    const StateSet meet(biv.chain.size(), {biv.index(1, 1)});
    const std::vector<double> mgf = hitting_mgf(biv.chain, meet, r2);
    bool per_delay = true;
    for (std::size_t n = 0; n < p.support(); ++n)
    {
        const double exact = n == 0 ? 1.0 : mgf[biv.index(1, n + 1)];
        per_delay = per_delay && std::log(exact) <= kendall_delay_bound(k, n).log() + 1e-12;
    }
    b.check("per_delay_mgf", per_delay, "E[r2^T0n] against D r2 / (2 (r2 - 1)) r2^n");
    b.check("kendall_sum", v.passed,
            "total " + num(v.total) + " <= L = " + magnitude_text(k.L.log()));

    const RenewalSequence u = renewal_sequence(p, horizon);
    const double pi1 = stationary_delay(p).pi1;
    double cumulative = 0.0;
    double weight = 1.0;
    for (std::size_t n = 1; n <= horizon; ++n)
    {
        weight *= r2;
        cumulative += std::abs(u(n) - pi1) * weight;
        b.row(n, cumulative, k.L.log());
    }
}

void emit_inputs(Builder& b, const HarrisInputs& in)
{
    b.begin("inputs");
    b.put("delta", in.delta);
    b.put("lambda", in.lambda);
    b.put("b", in.b);
    b.put("N0", in.n0);
    b.put("c", in.c);
    b.put("M_U", in.M_U);
    b.put("M_C", in.M_C);
    b.end();
}

void emit_bound_check(Builder& b, const HarrisVerification& v)
{
    b.check("harris_bound", v.passed,
            "worst ln(distance / bound) " + num(v.worst_log_ratio) + " at state " +
                std::to_string(v.worst_state) + ", n = " + std::to_string(v.worst_n));
    for (const auto& row : v.rows) b.row(row.n, row.exact_distance, row.log_bound);
}

std::size_t source_index(const ProblemSpec& spec, const FiniteChain& chain)
{
    return spec.tunables.source ? chain.index_of(*spec.tunables.source) : 0;
}

void run_harris(const ProblemSpec& spec, std::size_t horizon, Builder& b)
{
    const FiniteChain chain = build_chain(spec);
    const WeightFunction weight = build_weight(spec);
    const MinorizationCertificate mcert = build_minorization(spec, chain);
    const DriftCertificate dcert = build_drift(spec, chain);

    HarrisInputs inputs;
    try
    {
        inputs = verify_hypotheses(chain, mcert, dcert, *spec.n0);
    }
    catch (const HypothesisError& e)
    {
        b.check("hypotheses", false, e.what());
        return;
    }
    b.check("hypotheses", true, "small set, drift and petiteness verified exactly");
    emit_inputs(b, inputs);

    const HarrisBound hb = harris_constants(inputs);
    b.begin("constants");
    b.magnitude("final", "D", hb.D);
    b.put("gamma", hb.gamma());
    b.rate("final", "r", hb.rate);
    b.put("gamma_below_one", std::isfinite(hb.log_kappa()));
    b.end();
    trace_entries(b, hb.trace);

    const SplitChain split = split_chain(chain, mcert, weight);
    const AtomAccessCheck access = check_atom_access(split);
    b.check("atom_access", access.passed,
            "min P(x_i, U_1) " + num(access.min_access) + " >= " +
                num(atom_access_bound(mcert.delta)));
    const InvariantReport inv = invariant_identities(split, split.vhat.values());
    b.check("invariant_identities", inv.passed,
            "kac " + num(inv.kac_error) + ", marginal " + num(inv.marginal_vs_base));
    const SplitDrift sd = measure_split_drift(split, dcert.set, dcert.lambda, dcert.b);
    b.begin("split_drift");
    b.put("lambda", sd.lambda);
    b.put("b", sd.b);
    b.put("base_constants_hold", sd.base_constants_hold);
    b.end();

    emit_bound_check(b, check_harris_bound(chain, weight, hb, horizon, source_index(spec, chain)));
}

void run_verify(const ProblemSpec& spec, std::size_t horizon, Builder& b)
{
    const FiniteChain chain = build_chain(spec);
    const WeightFunction weight = build_weight(spec);
    if (spec.minorization && spec.drift && spec.n0)
    {
        try
        {
            verify_hypotheses(chain, build_minorization(spec, chain), build_drift(spec, chain),
                              *spec.n0);
            b.check("hypotheses", true, "small set, drift and petiteness verified exactly");
        }
        catch (const HypothesisError& e)
        {
            b.check("hypotheses", false, e.what());
        }
    }
    HarrisBound hb;
    hb.D = LogReal::from_log(spec.bound->log_D);
    hb.rate = Rate::from_log_kappa(spec.bound->log_kappa);
    b.begin("constants");
    b.magnitude("claimed", "D", hb.D);
    b.put("gamma", hb.gamma());
    b.put("log_kappa", hb.log_kappa());
    b.end();
    emit_bound_check(b, check_harris_bound(chain, weight, hb, horizon, source_index(spec, chain)));
}

void run_simulate(const ProblemSpec& spec, std::size_t horizon, std::uint64_t seed, Builder& b)
{
    const Tunables& t = spec.tunables;
    const SimulationConfig cfg{seed, t.replications, t.cap};
    const double rate = t.mgf_rate.value_or(1.05);
    b.begin("simulation");
    b.put("seed", seed);
    b.put("replications", t.replications);
    b.put("cap", t.cap);
    b.put("mgf_rate", rate);

    SampleSummary s;
    std::vector<double> law;
    double exact_mgf = 1.0;
    double exact_mean = 0.0;
    if (spec.increment)
    {
        const IncrementDistribution p(*spec.increment);
        b.put("delay", t.delay);
        require(t.delay < p.support(),
                "simulate: the exact comparison needs a delay below the increment support");
        s = simulate_coupling_time(p, t.delay, cfg, rate);
        if (t.delay > 0)
        {
            const BivariateChain biv = bivariate_chain(p);
            const StateSet meet(biv.chain.size(), {biv.index(1, 1)});
            const std::size_t start = biv.index(1, t.delay + 1);
            exact_mgf = hitting_mgf(biv.chain, meet, rate)[start];
            exact_mean = expected_hitting_time(biv.chain, meet)[start];
            law = hitting_law(biv.chain, start, meet, horizon).probs;
        }
    }
    else
    {
        const FiniteChain chain = build_chain(spec);
        const std::size_t source = chain.index_of(*t.source);
        const StateSet target = build_set(chain, t.target);
        s = simulate_hitting(chain, source, target, cfg, rate);
        exact_mgf = hitting_mgf(chain, target, rate)[source];
        exact_mean = expected_hitting_time(chain, target)[source];
        law = hitting_law(chain, source, target, horizon).probs;
    }
    b.put("censored", s.censored);
    b.put("mean", s.mean);
    b.put("mean_std_error", s.mean_std_error);
    b.put("mgf", s.mgf);
    b.put("mgf_std_error", s.mgf_std_error);
    b.put("exact_mean", exact_mean);
    b.put("exact_mgf", exact_mgf);
    b.end();

    const Agreement mean = compare(exact_mean, s.mean, s.mean_std_error);
    const Agreement mgf = compare(exact_mgf, s.mgf, s.mgf_std_error);
    b.check("mean_within_3se", mean.within(3.0), with_z(mean));
    b.check("mgf_within_3se", mgf.within(3.0), with_z(mgf));
    if (!law.empty())
    {
        const std::vector<Agreement> buckets = compare_law(s, law);
        std::size_t over3 = 0;
        bool over4 = false;
        double worst = 0.0;
        for (std::size_t n = 1; n <= buckets.size(); ++n)
        {
            const Agreement& a = buckets[n - 1];
            // the normal approximation needs a few expected hits per bucket
            if (a.exact * static_cast<double>(s.replications) < 5.0) continue;
            if (a.z > 3.0) ++over3;
            if (a.z > 4.0) over4 = true;
            worst = std::max(worst, a.z);
            b.row(n, std::abs(a.estimate - a.exact), std::log(3.0 * a.std_error));
        }
        // a single excursion up to 4 standard errors is flagged, not failed
        b.check("law_within_3se", !over4 && over3 <= 1,
                "worst z " + num(worst) + ", buckets above 3 se: " + std::to_string(over3));
    }
}

}  // namespace

RunReport run(const ProblemSpec& spec, const RunOptions& options)
{
    RunReport report;
    Builder b(report, spec.kind);
    const std::size_t horizon = options.horizon.value_or(spec.tunables.horizon);
    require(horizon >= 1, "run: horizon must be >= 1");
    b.put("horizon", horizon);
    switch (spec.kind)
    {
        case ProblemKind::renewal: run_renewal(spec, horizon, b); break;
        case ProblemKind::kendall: run_kendall(spec, horizon, b); break;
        case ProblemKind::harris: run_harris(spec, horizon, b); break;
        case ProblemKind::verify: run_verify(spec, horizon, b); break;
        case ProblemKind::simulate:
            run_simulate(spec, horizon, options.seed.value_or(spec.tunables.seed), b);
            break;
    }
    b.finish();
    return report;
}

void write_report(const RunReport& report, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    std::ofstream yaml(dir / "report.yaml");
    yaml << report.yaml;
    std::ofstream csv(dir / "verification.csv");
    csv << report.csv;
    if (!yaml || !csv) throw Error(ErrorCode::invalid_argument, "cannot write report to " + dir.string());
}

}  // namespace ergo
