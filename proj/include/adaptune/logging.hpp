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

#pragma once

#include <sstream>
#include <string>

namespace adaptune::log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3 };

/// Minimum level that gets written to stderr (default: Info).
void set_level(Level level);
Level level();

void write(Level level, const std::string & message);

namespace detail {
inline void append(std::ostringstream &) {}
template <typename T, typename... Rest>
void append(std::ostringstream & os, const T & head, const Rest &... rest)
{
  os << head;
  append(os, rest...);
}
template <typename... Args>
std::string concat(const Args &... args)
{
  std::ostringstream os;
  append(os, args...);
  return os.str();
}
}  // namespace detail

template <typename... Args>
void debug(const Args &... args)
{
  write(Level::kDebug, detail::concat(args...));
}
template <typename... Args>
void info(const Args &... args)
{
  write(Level::kInfo, detail::concat(args...));
}
template <typename... Args>
void warn(const Args &... args)
{
  write(Level::kWarn, detail::concat(args...));
}
template <typename... Args>
void error(const Args &... args)
{
  write(Level::kError, detail::concat(args...));
}

}  // namespace adaptune::log
