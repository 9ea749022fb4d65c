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

#include "xeblab/parallel.h"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace xeblab {

namespace {

size_t default_threads() {
    if (const char *env = std::getenv("XEBLAB_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) {
                return static_cast<size_t>(v);
            }
        } catch (const std::exception &) {
        }
    }
    return static_cast<size_t>(omp_get_max_threads());
}

size_t &limit_slot() {
    static size_t limit = default_threads();
    return limit;
}

}  // namespace

void set_thread_limit(size_t threads) {
    limit_slot() = threads == 0 ? default_threads() : threads;
}

size_t thread_limit() {
    return limit_slot();
}

}  // namespace xeblab
