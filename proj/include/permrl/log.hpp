// Copyright 2026 The permrl Authors
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

#ifndef PERMRL_LOG_HPP_
#define PERMRL_LOG_HPP_

#include <string>

namespace permrl {
namespace log {

enum class Level { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Current level. Initialized once from the PERMRL_LOG environment variable
// ("error", "warn", "info", "debug"); defaults to "warn".
Level level();

bool enabled(Level lvl);

// Writes "[permrl] <msg>" to stderr when lvl is enabled.
void write(Level lvl, const std::string& msg);

inline void error(const std::string& msg) { write(Level::kError, msg); }
inline void warn(const std::string& msg) { write(Level::kWarn, msg); }
inline void info(const std::string& msg) { write(Level::kInfo, msg); }
inline void debug(const std::string& msg) { write(Level::kDebug, msg); }

}  // namespace log
}  // namespace permrl

#endif  // PERMRL_LOG_HPP_
