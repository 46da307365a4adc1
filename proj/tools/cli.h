// Copyright 2026 The bab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BAB_TOOLS_CLI_H_
#define BAB_TOOLS_CLI_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "bab/audit.h"
#include "bab/errors.h"

namespace bab::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitTransport = 3;
inline constexpr int kExitInternal = 4;

int ExitCodeFor(ErrorKind kind);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Reads the process environment.
std::optional<std::string> ProcessEnv(const std::string& name);

// Runs one command line (args[0] is the program name). Diagnostics go to
// `err`; reports rendered without --out go to `out`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = ProcessEnv);

// "sha256:<hex>" of a byte string or a file's contents.
std::string Sha256Digest(std::string_view data);
std::string FileDigest(const std::filesystem::path& path);

// Config precedence, lowest first: defaults, BAB_<FIELD> environment
// variables, the config file, then `flags` (a JSON object of overrides).
AuditConfig ResolveConfig(const std::optional<std::filesystem::path>& config_path,
                          std::string_view flags_json, const EnvLookup& env);

}  // namespace bab::cli

#endif  // BAB_TOOLS_CLI_H_
