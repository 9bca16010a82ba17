// Copyright 2026 The qlab Authors
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

#ifndef QLAB_PARALLEL_HPP
#define QLAB_PARALLEL_HPP

#include <functional>

namespace qlab {

// Worker cap for data-parallel loops: QLAB_THREADS if set (>= 1), otherwise
// the machine core count.
int thread_budget();

// Runs body(i) for i in [0, n). Iterations must be independent; callers key
// results by index so the outcome does not depend on scheduling. The first
// exception thrown by any iteration is rethrown after the loop drains.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace qlab

#endif  // QLAB_PARALLEL_HPP
