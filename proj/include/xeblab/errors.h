// Copyright 2026 The xeblab Authors
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

#ifndef XEBLAB_ERRORS_H
#define XEBLAB_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xeblab {

/// Invalid circuit distribution or topology parameters.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Work that would exceed a configured resource limit (qubit cap, memory).
class ResourceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input. The message is prefixed with the offending line.
class ParseError : public std::runtime_error {
   public:
    ParseError(size_t line, const std::string &reason)
        : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {
    }
    size_t line() const {
        return line_;
    }

   private:
    size_t line_;
};

}  // namespace xeblab

#endif
