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

#ifndef XEBLAB_PARALLEL_H
#define XEBLAB_PARALLEL_H

#include <cstddef>

namespace xeblab {

/// Caps the number of worker threads used by trial loops and gate kernels.
/// Zero restores the default: XEBLAB_THREADS if set, otherwise the OpenMP default.
void set_thread_limit(size_t threads);
size_t thread_limit();

}  // namespace xeblab

#endif
