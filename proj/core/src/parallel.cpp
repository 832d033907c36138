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
#include "photinject/parallel.hpp"

#include <cstdlib>
#include <string>

namespace photinject {

std::size_t worker_count() {
    const char *env = std::getenv("PHOTINJECT_THREADS");
    if (env == nullptr || *env == '\0') {
        return 1;
    }
    try {
        const long v = std::stol(env);
        return static_cast<std::size_t>(std::clamp(v, 1L, 256L));
    } catch (...) {
        return 1;
    }
}

}  // namespace photinject
