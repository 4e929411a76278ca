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

#include "ergo/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ergo/error.hpp"
#include "ergo/renewal.hpp"

namespace ergo
{

namespace
{

constexpr double kMassTolerance = 1e-12;

[[noreturn]] void parse_fail(const YAML::Mark& mark, const std::string& field,
                             const std::string& what)
{
    std::string where = mark.is_null() ? "" : "line " + std::to_string(mark.line + 1) + ", ";
    throw Error(ErrorCode::parse_error, where + "field '" + field + "': " + what);
}

[[noreturn]] void invalid(const std::string& what)
{
    throw Error(ErrorCode::validation_error, what);
}

void check_keys(const YAML::Node& node, const std::string& field,
                std::initializer_list<const char*> allowed)
{
    if (!node.IsMap()) parse_fail(node.Mark(), field, "expected a mapping");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node)
    {
        const std::string key = kv.first.as<std::string>();
        if (!ok.count(key)) parse_fail(kv.first.Mark(), field.empty() ? key : field + "." + key, "unknown field");
    }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field)
{
    if (!node.IsScalar()) parse_fail(node.Mark(), field, "expected a scalar");
    try
    {
        return node.as<T>();
    }
    catch (const YAML::Exception&)
    {
        parse_fail(node.Mark(), field, "cannot convert '" + node.Scalar() + "'");
    }
}

std::size_t count(const YAML::Node& node, const std::string& field)
{
    const long long v = scalar<long long>(node, field);
    if (v < 0) parse_fail(node.Mark(), field, "expected a nonnegative integer");
    return static_cast<std::size_t>(v);
}

template <typename T>
std::vector<T> sequence(const YAML::Node& node, const std::string& field)
{
    if (!node.IsSequence()) parse_fail(node.Mark(), field, "expected a sequence");
    std::vector<T> out;
    for (std::size_t i = 0; i < node.size(); ++i)
    {
        out.push_back(scalar<T>(node[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

const YAML::Node required(const YAML::Node& parent, const char* key, const std::string& field)
{
    const YAML::Node n = parent[key];
    if (!n) parse_fail(parent.Mark(), field.empty() ? key : field + "." + key, "missing");
    return n;
}

void check_probability(const std::vector<double>& v, const std::string& what)
{
    double total = 0.0;
    for (double x : v)
    {
        if (!(x >= 0.0)) invalid(what + ": entries must be nonnegative");
        total += x;
    }
    if (std::abs(total - 1.0) > kMassTolerance) invalid(what + ": must sum to 1 (got " + std::to_string(total) + ")");
}

void validate(const ProblemSpec& spec)
{
    const Tunables& t = spec.tunables;
    if (t.horizon < 1) invalid("tunables.horizon must be >= 1");
    if (t.replications < 1) invalid("tunables.replications must be >= 1");
    if (t.cap < 1) invalid("tunables.cap must be >= 1");
    if (t.r && !(*t.r > 1.0)) invalid("tunables.r must exceed 1");
    if (t.r2 && !(*t.r2 > 1.0)) invalid("tunables.r2 must exceed 1");
    if (t.mgf_rate && !(*t.mgf_rate >= 1.0)) invalid("tunables.mgf_rate must be >= 1");
    if (t.eta && t.r && !(*t.eta > 1.0 / *t.r && *t.eta < 1.0)) invalid("tunables.eta must lie in (1/r, 1)");

    std::optional<IncrementDistribution> p;
    if (spec.increment) p = IncrementDistribution(*spec.increment);

    std::optional<FiniteChain> chain;
    if (spec.chain)
    {
        chain = build_chain(spec);
        build_weight(spec);
        if (t.source) chain->index_of(*t.source);
        build_set(*chain, t.target);
    }
    if (spec.minorization)
    {
        if (!chain) invalid("minorization requires a chain block");
        check_probability(spec.minorization->measure, "minorization.measure");
        build_minorization(spec, *chain);
    }
    if (spec.drift)
    {
        if (!chain) invalid("drift requires a chain block");
        build_drift(spec, *chain);
    }
    if (spec.n0 && *spec.n0 < 1) invalid("petiteness.n0 must be >= 1");

    switch (spec.kind)
    {
        case ProblemKind::renewal:
            if (!p) invalid("renewal needs an increment block");
            if ((*p)(1) <= 0.0) invalid("renewal needs p(1) > 0");
            break;
        case ProblemKind::kendall:
            if (!p) invalid("kendall needs an increment block");
            if ((*p)(1) <= 0.0) invalid("kendall needs p(1) > 0");
            if (!t.r) invalid("kendall needs tunables.r");
            break;
        case ProblemKind::harris:
            if (!chain || !spec.minorization || !spec.drift || !spec.n0)
            {
                invalid("harris needs chain, minorization, drift and petiteness blocks");
            }
            break;
        case ProblemKind::verify:
            if (!chain || !spec.bound) invalid("verify needs chain and bound blocks");
            break;
        case ProblemKind::simulate:
            if (p)
            {
                if ((*p)(1) <= 0.0) invalid("simulate needs p(1) > 0");
                if (t.delay >= p->support()) invalid("tunables.delay must be below the support size");
            }
            else if (chain)
            {
                if (!t.source || t.target.empty()) invalid("simulate on a chain needs tunables.source and tunables.target");
            }
            else
            {
                invalid("simulate needs an increment or a chain block");
            }
            break;
    }
}

}  // namespace

std::string_view to_string(ProblemKind kind)
{
    switch (kind)
    {
        case ProblemKind::renewal: return "renewal";
        case ProblemKind::kendall: return "kendall";
        case ProblemKind::harris: return "harris";
        case ProblemKind::verify: return "verify";
        case ProblemKind::simulate: return "simulate";
    }
    return "renewal";
}

std::optional<ProblemKind> parse_kind(std::string_view text)
{
    for (ProblemKind k : {ProblemKind::renewal, ProblemKind::kendall, ProblemKind::harris,
                          ProblemKind::verify, ProblemKind::simulate})
    {
        if (to_string(k) == text) return k;
    }
    return std::nullopt;
}

ProblemSpec parse_config(std::string_view text)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(std::string(text));
    }
    catch (const YAML::ParserException& e)
    {
        parse_fail(e.mark, "<document>", e.msg);
    }
    check_keys(root, "", {"kind", "increment", "chain", "weight", "minorization", "drift",
                          "petiteness", "bound", "tunables"});

    ProblemSpec spec;
    const YAML::Node kind = required(root, "kind", "");
    const auto parsed_kind = parse_kind(scalar<std::string>(kind, "kind"));
    if (!parsed_kind) parse_fail(kind.Mark(), "kind", "unknown kind '" + kind.Scalar() + "'");
    spec.kind = *parsed_kind;

    if (const auto n = root["increment"]) spec.increment = sequence<double>(n, "increment");
    if (const auto n = root["chain"])
    {
        check_keys(n, "chain", {"states", "matrix"});
        ChainBlock c;
        c.states = sequence<std::string>(required(n, "states", "chain"), "chain.states");
        const YAML::Node m = required(n, "matrix", "chain");
        if (!m.IsSequence()) parse_fail(m.Mark(), "chain.matrix", "expected a sequence of rows");
        for (std::size_t i = 0; i < m.size(); ++i)
        {
            c.matrix.push_back(sequence<double>(m[i], "chain.matrix[" + std::to_string(i) + "]"));
        }
        spec.chain = std::move(c);
    }
    if (const auto n = root["weight"]) spec.weight = sequence<double>(n, "weight");
    if (const auto n = root["minorization"])
    {
        check_keys(n, "minorization", {"small_set", "delta", "measure"});
        MinorizationBlock m;
        m.small_set = sequence<std::string>(required(n, "small_set", "minorization"), "minorization.small_set");
        m.delta = scalar<double>(required(n, "delta", "minorization"), "minorization.delta");
        m.measure = sequence<double>(required(n, "measure", "minorization"), "minorization.measure");
        spec.minorization = std::move(m);
    }
    if (const auto n = root["drift"])
    {
        check_keys(n, "drift", {"lambda", "b", "set"});
        DriftBlock d;
        d.lambda = scalar<double>(required(n, "lambda", "drift"), "drift.lambda");
        d.b = scalar<double>(required(n, "b", "drift"), "drift.b");
        d.set = sequence<std::string>(required(n, "set", "drift"), "drift.set");
        spec.drift = std::move(d);
    }
    if (const auto n = root["petiteness"])
    {
        check_keys(n, "petiteness", {"n0"});
        spec.n0 = count(required(n, "n0", "petiteness"), "petiteness.n0");
    }
    if (const auto n = root["bound"])
    {
        check_keys(n, "bound", {"log_D", "log_kappa", "D", "gamma"});
        BoundBlock b;
        if (n["log_D"] && n["D"]) parse_fail(n.Mark(), "bound", "give either D or log_D");
        if (n["log_kappa"] && n["gamma"]) parse_fail(n.Mark(), "bound", "give either gamma or log_kappa");
        if (n["log_D"]) b.log_D = scalar<double>(n["log_D"], "bound.log_D");
        else
        {
            const double D = scalar<double>(required(n, "D", "bound"), "bound.D");
            if (!(D >= 0.0)) invalid("bound.D must be nonnegative");
            b.log_D = std::log(D);
        }
        if (n["log_kappa"]) b.log_kappa = scalar<double>(n["log_kappa"], "bound.log_kappa");
        else
        {
            const double g = scalar<double>(required(n, "gamma", "bound"), "bound.gamma");
            if (!(g > 0.0 && g <= 1.0)) invalid("bound.gamma must lie in (0, 1]");
            b.log_kappa = std::log(-std::log(g));
        }
        spec.bound = b;
    }
    if (const auto n = root["tunables"])
    {
        check_keys(n, "tunables", {"r", "eta", "r2", "horizon", "seed", "replications", "cap",
                                   "delay", "mgf_rate", "source", "target"});
        Tunables& t = spec.tunables;
        if (n["r"]) t.r = scalar<double>(n["r"], "tunables.r");
        if (n["eta"]) t.eta = scalar<double>(n["eta"], "tunables.eta");
        if (n["r2"]) t.r2 = scalar<double>(n["r2"], "tunables.r2");
        if (n["horizon"]) t.horizon = count(n["horizon"], "tunables.horizon");
        if (n["seed"]) t.seed = scalar<std::uint64_t>(n["seed"], "tunables.seed");
        if (n["replications"]) t.replications = count(n["replications"], "tunables.replications");
        if (n["cap"]) t.cap = count(n["cap"], "tunables.cap");
        if (n["delay"]) t.delay = count(n["delay"], "tunables.delay");
        if (n["mgf_rate"]) t.mgf_rate = scalar<double>(n["mgf_rate"], "tunables.mgf_rate");
        if (n["source"]) t.source = scalar<std::string>(n["source"], "tunables.source");
        if (n["target"]) t.target = sequence<std::string>(n["target"], "tunables.target");
    }
    validate(spec);
    return spec;
}

ProblemSpec load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::parse_error, "cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ProblemSpec& spec)
{
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(spec.kind));
    if (spec.increment) out << YAML::Key << "increment" << YAML::Value << YAML::Flow << *spec.increment;
    if (spec.chain)
    {
        out << YAML::Key << "chain" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "states" << YAML::Value << YAML::Flow << spec.chain->states;
        out << YAML::Key << "matrix" << YAML::Value << YAML::BeginSeq;
        for (const auto& row : spec.chain->matrix) out << YAML::Flow << row;
        out << YAML::EndSeq << YAML::EndMap;
    }
    if (spec.weight) out << YAML::Key << "weight" << YAML::Value << YAML::Flow << *spec.weight;
    if (spec.minorization)
    {
        out << YAML::Key << "minorization" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "small_set" << YAML::Value << YAML::Flow << spec.minorization->small_set;
        out << YAML::Key << "delta" << YAML::Value << spec.minorization->delta;
        out << YAML::Key << "measure" << YAML::Value << YAML::Flow << spec.minorization->measure;
        out << YAML::EndMap;
    }
    if (spec.drift)
    {
        out << YAML::Key << "drift" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "lambda" << YAML::Value << spec.drift->lambda;
        out << YAML::Key << "b" << YAML::Value << spec.drift->b;
        out << YAML::Key << "set" << YAML::Value << YAML::Flow << spec.drift->set;
        out << YAML::EndMap;
    }
    if (spec.n0)
    {
        out << YAML::Key << "petiteness" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "n0" << YAML::Value << *spec.n0 << YAML::EndMap;
    }
    if (spec.bound)
    {
        out << YAML::Key << "bound" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "log_D" << YAML::Value << spec.bound->log_D;
        out << YAML::Key << "log_kappa" << YAML::Value << spec.bound->log_kappa;
        out << YAML::EndMap;
    }
    const Tunables& t = spec.tunables;
    out << YAML::Key << "tunables" << YAML::Value << YAML::BeginMap;
    if (t.r) out << YAML::Key << "r" << YAML::Value << *t.r;
    if (t.eta) out << YAML::Key << "eta" << YAML::Value << *t.eta;
    if (t.r2) out << YAML::Key << "r2" << YAML::Value << *t.r2;
    out << YAML::Key << "horizon" << YAML::Value << t.horizon;
    out << YAML::Key << "seed" << YAML::Value << t.seed;
    out << YAML::Key << "replications" << YAML::Value << t.replications;
    out << YAML::Key << "cap" << YAML::Value << t.cap;
    out << YAML::Key << "delay" << YAML::Value << t.delay;
    if (t.mgf_rate) out << YAML::Key << "mgf_rate" << YAML::Value << *t.mgf_rate;
    if (t.source) out << YAML::Key << "source" << YAML::Value << *t.source;
    if (!t.target.empty()) out << YAML::Key << "target" << YAML::Value << YAML::Flow << t.target;
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

FiniteChain build_chain(const ProblemSpec& spec)
{
    if (!spec.chain) invalid("no chain block");
    const ChainBlock& c = *spec.chain;
    for (const auto& row : c.matrix)
    {
        if (row.size() != c.matrix.size()) invalid("chain.matrix must be square");
    }
    std::set<std::string> seen(c.states.begin(), c.states.end());
    if (seen.size() != c.states.size()) invalid("chain.states must be distinct");
    return FiniteChain(c.states, Matrix::from_rows(c.matrix));
}

WeightFunction build_weight(const ProblemSpec& spec)
{
    const std::size_t n = spec.chain ? spec.chain->states.size() : 0;
    if (!spec.weight) return WeightFunction::constant(n);
    if (spec.weight->size() != n) invalid("weight must have one entry per state");
    return WeightFunction(*spec.weight);
}

StateSet build_set(const FiniteChain& chain, const std::vector<std::string>& labels)
{
    std::vector<std::size_t> members;
    for (const auto& l : labels) members.push_back(chain.index_of(l));
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return StateSet(chain.size(), members);
}

MinorizationCertificate build_minorization(const ProblemSpec& spec, const FiniteChain& chain)
{
    if (!spec.minorization) invalid("no minorization block");
    const MinorizationBlock& m = *spec.minorization;
    if (m.measure.size() != chain.size()) invalid("minorization.measure must have one entry per state");
    if (!(m.delta > 0.0 && m.delta <= 1.0)) invalid("minorization.delta must lie in (0, 1]");
    if (m.small_set.empty()) invalid("minorization.small_set must be nonempty");
    return {build_set(chain, m.small_set), m.delta, m.measure};
}

DriftCertificate build_drift(const ProblemSpec& spec, const FiniteChain& chain)
{
    if (!spec.drift) invalid("no drift block");
    const DriftBlock& d = *spec.drift;
    if (!(d.lambda > 0.0 && d.lambda < 1.0)) invalid("drift.lambda must lie in (0, 1)");
    if (!(d.b >= 0.0)) invalid("drift.b must be nonnegative");
    return {build_weight(spec), d.lambda, d.b, build_set(chain, d.set)};
}

}  // namespace ergo
