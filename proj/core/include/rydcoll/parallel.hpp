// Copyright 2026 The rydcoll Authors
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

#include <cstddef>
#include <functional>

namespace rydcoll {

/// Worker count from RYDCOLL_WORKERS, else the hardware concurrency.
int default_worker_count();

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks are
/// claimed dynamically; the first exception thrown by any task is rethrown
/// after all workers stop.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task);

}  // namespace rydcoll
