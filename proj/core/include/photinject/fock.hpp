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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "photinject/linalg.hpp"

namespace photinject {

/// Photon occupation numbers, one entry per optical mode.
class FockState {
  public:
    FockState() = default;
    /// Throws std::invalid_argument on a negative occupation.
    explicit FockState(std::vector<int> occupations);
    FockState(std::initializer_list<int> occupations)
        : FockState(std::vector<int>(occupations)) {}

    std::size_t modes() const { return occupations_.size(); }
    int photons() const { return photons_; }
    int operator[](std::size_t mode) const { return occupations_[mode]; }
    std::span<const int> occupations() const { return occupations_; }

    /// JSON array form, e.g. "[2,0,1]".
    std::string to_json() const;
    /// Parses the JSON array form; throws std::invalid_argument.
    static FockState from_json(const std::string &text);

    friend bool operator==(const FockState &, const FockState &) = default;
    friend std::strong_ordering operator<=>(const FockState &a, const FockState &b) {
        return a.occupations_ <=> b.occupations_;
    }

  private:
    std::vector<int> occupations_;
    int photons_ = 0;
};

struct FockStateHash {
    std::size_t operator()(const FockState &s) const noexcept;
};

/// The ordered basis of the n-photon, m-mode sector. States are listed in
/// descending lexicographic order, starting at (n,0,...,0) and ending at
/// (0,...,0,n). A FockBasis is a cheap, immutable value handle.
class FockBasis {
  public:
    FockBasis(int modes, int photons);

    int modes() const { return data_->modes; }
    int photons() const { return data_->photons; }
    std::size_t size() const { return data_->states.size(); }
    const FockState &operator[](std::size_t position) const { return data_->states[position]; }
    const std::vector<FockState> &states() const { return data_->states; }

    /// Position of s in the basis. Throws std::invalid_argument if s has the
    /// wrong length or photon count.
    std::size_t index(const FockState &s) const;
    bool contains(const FockState &s) const;

    friend bool operator==(const FockBasis &a, const FockBasis &b) {
        return a.modes() == b.modes() && a.photons() == b.photons();
    }

  private:
    struct Data {
        int modes = 0;
        int photons = 0;
        std::vector<FockState> states;
        std::unordered_map<FockState, std::size_t, FockStateHash> index;
    };
    std::shared_ptr<const Data> data_;
};

/// Largest basis enumerate_basis will materialize.
inline constexpr std::uint64_t kMaxBasisSize = 5'000'000;

/// Enumerates the sector; throws std::invalid_argument for m = 0 or n < 0 and
/// std::length_error when the sector exceeds kMaxBasisSize.
FockBasis enumerate_basis(int modes, int photons);

/// All length-`parts` tuples of non-negative integers summing to `total`, in
/// descending lexicographic order.
std::vector<std::vector<int>> weak_compositions(int total, int parts);

/// Binomial coefficient; throws std::overflow_error when it does not fit.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Number of states with n photons in m modes, C(m+n-1, n).
std::uint64_t sector_dimension(int modes, int photons);

/// Exact product of per-mode factorials; throws std::overflow_error.
std::uint64_t occupation_factorial(const FockState &s);

/// Mode list with mode i repeated s_i times, e.g. (2,0,1) -> {0,0,2}.
std::vector<int> repeated_modes(const FockState &s);

/// The |s| x |t| matrix built from U by repeating row i s_i times and column j
/// t_j times. Throws std::invalid_argument on a photon-count or mode mismatch.
CMatrix substitution_submatrix(const CMatrix &u, const FockState &s, const FockState &t);

}  // namespace photinject
