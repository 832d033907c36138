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

#include <cstdint>

#include "photinject/linalg.hpp"

namespace photinject {

/// Default largest matrix side accepted by permanent_exact.
inline constexpr int kPermanentExactCap = 20;
/// Largest side accepted by the n!-term oracle.
inline constexpr int kPermanentNaiveCap = 9;

/// Exact permanent by Glynn's formula, enumerating sign vectors in Gray-code
/// order (O(2^n n) operations) with compensated accumulation. per of the 0x0
/// matrix is 1. Throws std::invalid_argument for a non-square input and
/// std::length_error when the side exceeds `cap`.
Complex permanent_exact(const CMatrix &a, int cap = kPermanentExactCap);

/// Permanent as the sum over all n! permutations. Test oracle only; throws
/// std::length_error above kPermanentNaiveCap.
Complex permanent_naive(const CMatrix &a);

/// d/de per(A + e B) at e = 0, i.e. the sum over rows i of per(A with row i
/// taken from B).
Complex permanent_derivative(const CMatrix &a, const CMatrix &direction,
                             int cap = kPermanentExactCap);

struct PermanentEstimate {
    Complex value;
    std::uint64_t samples = 0;
    /// sqrt(sample variance / samples). Infinite when samples == 1.
    double empirical_std_error = 0.0;
};

/// Gurvits' randomized estimator: the mean over uniform x in {+1,-1}^n of
/// prod_i x_i * prod_j (sum_i x_i a_ij), which is unbiased for per(A).
/// Samples are split into a fixed set of substreams derived from `seed` and
/// reduced in stream order, so the result is bit-identical for any worker
/// count. Throws std::invalid_argument for zero samples or non-square input.
PermanentEstimate gurvits_estimate(const CMatrix &a, std::uint64_t samples, std::uint64_t seed);

}  // namespace photinject
