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

#ifndef FR3_CLI_HPP
#define FR3_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fr3::cli
{

// Process exit status.
enum ExitCode : int
{
    kOk = 0,
    kUsage = 1,          // bad flags, invalid config, schema violation
    kIo = 2,             // unreadable input / unwritable output
    kValidationFail = 3, // `validate` found a failing check
};

// Runs `fr3chan <args...>` (args excludes the program name). Output without -o goes
// to `out`; diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace fr3::cli

#endif
