// Copyright 2026 The s2gaps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef S2GAPS_CLI_HPP
#define S2GAPS_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "s2gaps/report.hpp"

namespace s2gaps::cli {

inline constexpr const char* kCacheDirEnv = "S2GAPS_CACHE_DIR";
inline constexpr const char* kDefaultCacheDir = ".s2gaps-cache";
inline constexpr std::uint64_t kDefaultXMax = 10'000'000;

struct RunConfig {
  std::optional<std::uint64_t> x_max;  // default: max(kDefaultXMax, what the command needs)
  std::filesystem::path cache_dir;     // empty disables the cache
  Format output_format = Format::csv;
  unsigned threads = 1;
  std::optional<double> tolerance;  // overrides the sum truncation tolerance
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;

// Parses argv, runs one subcommand, writes the report to `out` and
// diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace s2gaps::cli

#endif  // S2GAPS_CLI_HPP
