// Copyright 2026 The photinject Authors
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace photinject {

/// Worker count from PHOTINJECT_THREADS (default 1, clamped to [1, 256]).
std::size_t worker_count();

namespace detail {
inline bool &in_parallel_region() {
    thread_local bool flag = false;
    return flag;
}
}  // namespace detail

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each index
/// is processed exactly once; callers write results into per-index slots, so
/// the outcome does not depend on the number of workers. Nested calls run
/// serially on the worker that issued them. The first exception thrown by any
/// body is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t count, Body &&body) {
    const std::size_t workers = std::min(worker_count(), count);
    if (workers <= 1 || detail::in_parallel_region()) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            detail::in_parallel_region() = true;
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace photinject
