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

#include <cstddef>

#include "photinject/fock.hpp"
#include "photinject/linalg.hpp"

namespace photinject {

/// Largest sector dimension lift_unitary will build densely.
inline constexpr std::size_t kMaxLiftDimension = 20'000;

/// Action of a linear-optical unitary on the n-photon sector. Rows and columns
/// follow basis order.
struct LiftedUnitary {
    FockBasis basis;
    CMatrix matrix;
};

/// n-photon unitary with entries per(U[s-rows, t-cols]) / sqrt(s! t!).
/// Throws std::invalid_argument when U is not basis.modes() square, and
/// std::length_error when the sector or the permanent size exceeds its cap.
LiftedUnitary lift_unitary(const CMatrix &u, const FockBasis &basis);

/// Derivative of the lift along dU: d/de phi(U + e dU) at e = 0. Only the
/// multilinearity of the permanent is used, so dU need not be tangent to U(m).
CMatrix lift_derivative(const CMatrix &u, const CMatrix &du, const FockBasis &basis);

/// W psi. Throws std::invalid_argument on a length mismatch.
CVector apply_to_vector(const LiftedUnitary &w, const CVector &psi);

/// |<s| phi(U) |t>|^2 = |per(U[s-rows, t-cols])|^2 / (s! t!).
/// Throws std::invalid_argument when |s| != |t| or the lengths do not match U.
double transition_probability(const CMatrix &u, const FockState &t, const FockState &s);

}  // namespace photinject
