/*
 * Copyright 2026 the mbsd-synth authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MBSD_ERRORS_HPP
#define MBSD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mbsd {

// Malformed input: bad syntax, schema violations, unknown identifiers,
// inconsistent instances. Maps to CLI exit code 2.
class input_error : public std::runtime_error {
  public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource ceiling was hit (state-space caps, memory-bit caps,
// verification budgets). Maps to CLI exit code 3.
class cap_error : public std::runtime_error {
  public:
    explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mbsd

#endif
