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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ergo/config.hpp"

namespace ergo
{

struct RunOptions
{
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    bool trace = false;
};

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string detail;
};

struct RunReport
{
    ProblemKind kind = ProblemKind::renewal;
    bool passed = false;
    std::vector<CheckResult> checks;
    /// report.yaml contents
    std::string yaml;
    /// verification.csv contents: n, exact_distance, bound_value, margin
    std::string csv;
    /// one line per intermediate constant: stage, name, value
    std::string trace;
};

/// Runs the pipeline for spec.kind. Hypothesis failures and bound violations
/// become failed checks; other errors propagate.
RunReport run(const ProblemSpec& spec, const RunOptions& options = {});

/// Writes report.yaml and verification.csv into dir, creating it if needed.
void write_report(const RunReport& report, const std::filesystem::path& dir);

}  // namespace ergo
