// Copyright 2026 The Adaptune Authors
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

#include "adaptune/logging.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace adaptune::log {

namespace {
std::atomic<Level> g_level{Level::kInfo};
std::mutex g_mutex;

const char * tag(Level level)
{
  switch (level) {
    case Level::kDebug:
      return "debug";
    case Level::kInfo:
      return "info";
    case Level::kWarn:
      return "warn";
    default:
      return "error";
  }
}
}  // namespace

void set_level(Level level) { g_level.store(level); }

Level level() { return g_level.load(); }

void write(Level level, const std::string & message)
{
  if (static_cast<int>(level) < static_cast<int>(g_level.load())) {
    return;
  }
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[adaptune:" << tag(level) << "] " << message << "\n";
}

}  // namespace adaptune::log
