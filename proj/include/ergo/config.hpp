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

// Problem descriptions for the command-line front end, in YAML:
//
//   kind: harris                  # renewal | kendall | harris | verify | simulate
//   increment: [0.5, 0.5]         # p(1..L)
//   chain:
//     states: [a, b]
//     matrix: [[0.1, 0.9], [0.9, 0.1]]
//   weight: [1, 1]                # V, defaults to 1
//   minorization: {small_set: [a], delta: 0.1, measure: [1, 0]}
//   drift: {lambda: 0.9, b: 0.2, set: [a, b]}
//   petiteness: {n0: 1}
//   bound: {log_D: 3.0, log_kappa: -2.0}    # or {D: ..., gamma: ...}
//   tunables: {r: 1.2, eta: 0.9, r2: 1.01, horizon: 200, seed: 7,
//              replications: 100000, cap: 100000, delay: 1, mgf_rate: 1.05,
//              source: a, target: [b]}

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ergo/chain.hpp"
#include "ergo/splitting.hpp"
#include "ergo/drift.hpp"

namespace ergo
{

enum class ProblemKind
{
    renewal,
    kendall,
    harris,
    verify,
    simulate,
};

std::string_view to_string(ProblemKind kind);
std::optional<ProblemKind> parse_kind(std::string_view text);

struct ChainBlock
{
    std::vector<std::string> states;
    std::vector<std::vector<double>> matrix;
    friend bool operator==(const ChainBlock&, const ChainBlock&) = default;
};

struct MinorizationBlock
{
    std::vector<std::string> small_set;
    double delta = 0.0;
    std::vector<double> measure;
    friend bool operator==(const MinorizationBlock&, const MinorizationBlock&) = default;
};

struct DriftBlock
{
    double lambda = 0.0;
    double b = 0.0;
    std::vector<std::string> set;
    friend bool operator==(const DriftBlock&, const DriftBlock&) = default;
};

/// Claimed constants, kept in log form: D = e^{log_D}, gamma = exp(-e^{log_kappa}).
struct BoundBlock
{
    double log_D = 0.0;
    double log_kappa = 0.0;
    friend bool operator==(const BoundBlock&, const BoundBlock&) = default;
};

struct Tunables
{
    std::optional<double> r;
    std::optional<double> eta;
    std::optional<double> r2;
    std::size_t horizon = 200;
    std::uint64_t seed = 20261016;
    std::size_t replications = 100000;
    std::size_t cap = 100000;
    std::size_t delay = 1;
    std::optional<double> mgf_rate;
    std::optional<std::string> source;
    std::vector<std::string> target;
    friend bool operator==(const Tunables&, const Tunables&) = default;
};

struct ProblemSpec
{
    ProblemKind kind = ProblemKind::renewal;
    std::optional<std::vector<double>> increment;
    std::optional<ChainBlock> chain;
    std::optional<std::vector<double>> weight;
    std::optional<MinorizationBlock> minorization;
    std::optional<DriftBlock> drift;
    std::optional<std::size_t> n0;
    std::optional<BoundBlock> bound;
    Tunables tunables;
    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

/// Throws PARSE_ERROR (with line and field) for malformed text and
/// VALIDATION_ERROR naming the violated invariant.
ProblemSpec parse_config(std::string_view text);
ProblemSpec load_config(const std::filesystem::path& path);

/// YAML with 17 significant digits; parse_config inverts it exactly.
std::string serialize_config(const ProblemSpec& spec);

/// Typed views of a validated spec.
FiniteChain build_chain(const ProblemSpec& spec);
WeightFunction build_weight(const ProblemSpec& spec);
StateSet build_set(const FiniteChain& chain, const std::vector<std::string>& labels);
MinorizationCertificate build_minorization(const ProblemSpec& spec, const FiniteChain& chain);
DriftCertificate build_drift(const ProblemSpec& spec, const FiniteChain& chain);

}  // namespace ergo
