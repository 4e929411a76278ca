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

#include <stdexcept>
#include <string>
#include <string_view>

namespace ergo
{

enum class ErrorCode
{
    invalid_argument,
    non_unique,
    divergent,
    drift_violation,
    negative_row,
    rate_range,
    eta_range,
    r2_too_large,
    no_contraction,
    numeric_range,
    hypothesis_fail,
    bound_violation,
    excess_censoring,
    parse_error,
    validation_error,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::invalid_argument:
            return "INVALID_ARGUMENT";
        case ErrorCode::non_unique:
            return "NON_UNIQUE";
        case ErrorCode::divergent:
            return "DIVERGENT";
        case ErrorCode::drift_violation:
            return "DRIFT_VIOLATION";
        case ErrorCode::negative_row:
            return "NEGATIVE_ROW";
        case ErrorCode::rate_range:
            return "RATE_RANGE";
        case ErrorCode::eta_range:
            return "ETA_RANGE";
        case ErrorCode::r2_too_large:
            return "R2_TOO_LARGE";
        case ErrorCode::no_contraction:
            return "NO_CONTRACTION";
        case ErrorCode::numeric_range:
            return "NUMERIC_RANGE";
        case ErrorCode::hypothesis_fail:
            return "HYPOTHESIS_FAIL";
        case ErrorCode::bound_violation:
            return "BOUND_VIOLATION";
        case ErrorCode::excess_censoring:
            return "EXCESS_CENSORING";
        case ErrorCode::parse_error:
            return "PARSE_ERROR";
        case ErrorCode::validation_error:
            return "VALIDATION_ERROR";
    }
    return "UNKNOWN";
}

inline void require(bool condition, const std::string& what)
{
    if (!condition)
    {
        throw Error(ErrorCode::invalid_argument, what);
    }
}

}  // namespace ergo
