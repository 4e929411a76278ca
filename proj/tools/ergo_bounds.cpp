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

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "ergo/config.hpp"
#include "ergo/error.hpp"
#include "ergo/run.hpp"

namespace
{

struct Arguments
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    bool trace = false;
};

int exit_code_for(ergo::ErrorCode code)
{
    switch (code)
    {
        case ergo::ErrorCode::parse_error:
        case ergo::ErrorCode::validation_error:
        case ergo::ErrorCode::invalid_argument:
        case ergo::ErrorCode::eta_range:
        case ergo::ErrorCode::rate_range:
        case ergo::ErrorCode::r2_too_large:
            return 2;
        case ergo::ErrorCode::hypothesis_fail:
        case ergo::ErrorCode::bound_violation:
            return 1;
        default:
            return 3;
    }
}

int execute(ergo::ProblemKind kind, const Arguments& args)
{
    const ergo::ProblemSpec spec = ergo::load_config(args.config);
    if (spec.kind != kind)
    {
        std::cerr << "config describes a '" << ergo::to_string(spec.kind)
                  << "' problem, not '" << ergo::to_string(kind) << "'\n";
        return 2;
    }
    ergo::RunOptions options;
    options.seed = args.seed;
    options.horizon = args.horizon;
    options.trace = args.trace;
    const ergo::RunReport report = ergo::run(spec, options);

    if (args.trace) std::cout << report.trace;
    for (const auto& c : report.checks)
    {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    }
    if (!args.out.empty()) ergo::write_report(report, args.out);
    return report.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Verified geometric ergodicity constants for finite Markov chains"};
    app.require_subcommand(1);
    Arguments args;

    const std::pair<ergo::ProblemKind, const char*> commands[] = {
        {ergo::ProblemKind::renewal, "Renewal sequence and coupling inequality"},
        {ergo::ProblemKind::kendall, "Renewal rate constants (rho, L) with exact verification"},
        {ergo::ProblemKind::harris, "Constants (D, gamma) from certificates, verified exactly"},
        {ergo::ProblemKind::verify, "Check claimed (D, gamma) against exact distances"},
        {ergo::ProblemKind::simulate, "Monte Carlo cross-check of exact hitting quantities"},
    };
    for (const auto& [kind, help] : commands)
    {
        CLI::App* sub = app.add_subcommand(std::string(ergo::to_string(kind)), help);
        sub->add_option("--config", args.config, "Problem description (YAML)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", args.out, "Directory for report.yaml and verification.csv");
        sub->add_option("--seed", args.seed, "Override tunables.seed");
        sub->add_option("--horizon", args.horizon, "Override tunables.horizon");
        sub->add_flag("--trace", args.trace, "Print every intermediate constant");
    }
    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (const auto& [kind, help] : commands)
    {
        if (!app.got_subcommand(std::string(ergo::to_string(kind)))) continue;
        try
        {
            return execute(kind, args);
        }
        catch (const ergo::Error& e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return exit_code_for(e.code());
        }
        catch (const std::exception& e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
    }
    return 2;
}
