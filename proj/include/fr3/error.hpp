// SPDX-License-Identifier: Apache-2.0
//
// fr3chan: large-scale indoor-office channel model for the FR3 bands
// Copyright (C) 2026 The fr3chan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef FR3_ERROR_HPP
#define FR3_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fr3
{

// Input outside the mathematical domain of an operation (negative distance, empty tap set, ...).
class DomainError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Angular spread requested for (near) isotropic power, |resultant| < 1e-12.
class UndefinedSpreadError : public DomainError
{
public:
    using DomainError::DomainError;
};

// Regression design matrix without full column rank (all distances identical).
class RankDeficiencyError : public DomainError
{
public:
    using DomainError::DomainError;
};

// Iterative numerics that failed to converge.
class NumericError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// ZSA two-mode mixture inconsistent with the table's pooled moments.
class CalibrationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Invalid generator or run configuration.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Record file that does not match the wire schema; carries the 1-based line number.
class SchemaError : public std::runtime_error
{
public:
    SchemaError(std::size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace fr3

#endif
