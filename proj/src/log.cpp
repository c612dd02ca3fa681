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

#include "permrl/log.hpp"

#include <cstdlib>
#include <iostream>

namespace permrl {
namespace log {

namespace {

Level parse_level(const char* value) {
  if (value == nullptr) return Level::kWarn;
  const std::string v(value);
  if (v == "error") return Level::kError;
  if (v == "warn" || v == "warning") return Level::kWarn;
  if (v == "info") return Level::kInfo;
  if (v == "debug") return Level::kDebug;
  return Level::kWarn;
}

const char* tag(Level lvl) {
  switch (lvl) {
    case Level::kError: return "error";
    case Level::kWarn: return "warn";
    case Level::kInfo: return "info";
    case Level::kDebug: return "debug";
  }
  return "?";
}

}  // namespace

Level level() {
  static const Level lvl = parse_level(std::getenv("PERMRL_LOG"));
  return lvl;
}

bool enabled(Level lvl) { return static_cast<int>(lvl) <= static_cast<int>(level()); }

void write(Level lvl, const std::string& msg) {
  if (!enabled(lvl)) return;
  std::cerr << "[permrl " << tag(lvl) << "] " << msg << "\n";
}

}  // namespace log
}  // namespace permrl
