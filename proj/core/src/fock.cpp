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
#include "photinject/fock.hpp"

#include <stdexcept>

#include <json.hpp>

namespace photinject {

FockState::FockState(std::vector<int> occupations) : occupations_(std::move(occupations)) {
    long long total = 0;
    for (int v : occupations_) {
        if (v < 0) {
            throw std::invalid_argument("FockState: negative occupation");
        }
        total += v;
    }
    if (total > std::numeric_limits<int>::max()) {
        throw std::overflow_error("FockState: photon count overflows int");
    }
    photons_ = static_cast<int>(total);
}

std::string FockState::to_json() const { return nlohmann::json(occupations_).dump(); }

FockState FockState::from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("FockState: ") + e.what());
    }
    if (!j.is_array()) {
        throw std::invalid_argument("FockState: expected a JSON array");
    }
    std::vector<int> occ;
    for (const auto &v : j) {
        if (!v.is_number_integer()) {
            throw std::invalid_argument("FockState: entries must be integers");
        }
        occ.push_back(v.get<int>());
    }
    return FockState(std::move(occ));
}

std::size_t FockStateHash::operator()(const FockState &s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int v : s.occupations()) {
        h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

__extension__ using Wide = unsigned __int128;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    // C(n, i) is an integer at every step, so r * (n - k + i) / i stays exact.
    Wide r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            throw std::overflow_error("binomial coefficient overflows 64 bits");
        }
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t sector_dimension(int modes, int photons) {
    if (modes <= 0 || photons < 0) {
        throw std::invalid_argument("sector_dimension: need modes >= 1, photons >= 0");
    }
    return binomial(static_cast<std::uint64_t>(modes) + photons - 1,
                    static_cast<std::uint64_t>(photons));
}

namespace {

void compose(int remaining, std::size_t slot, std::vector<int> &current,
             std::vector<std::vector<int>> &out) {
    if (slot + 1 == current.size()) {
        current[slot] = remaining;
        out.push_back(current);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        current[slot] = v;
        compose(remaining - v, slot + 1, current, out);
    }
    current[slot] = 0;
}

}  // namespace

std::vector<std::vector<int>> weak_compositions(int total, int parts) {
    if (parts <= 0) {
        throw std::invalid_argument("weak_compositions: parts must be positive");
    }
    if (total < 0) {
        throw std::invalid_argument("weak_compositions: total must be non-negative");
    }
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(parts), 0);
    compose(total, 0, current, out);
    return out;
}

FockBasis::FockBasis(int modes, int photons) {
    if (modes <= 0) {
        throw std::invalid_argument("FockBasis: modes must be >= 1");
    }
    if (photons < 0) {
        throw std::invalid_argument("FockBasis: photons must be >= 0");
    }
    if (sector_dimension(modes, photons) > kMaxBasisSize) {
        throw std::length_error("FockBasis: sector too large to enumerate");
    }
    auto data = std::make_shared<Data>();
    data->modes = modes;
    data->photons = photons;
    for (auto &occ : weak_compositions(photons, modes)) {
        data->states.emplace_back(std::move(occ));
    }
    data->index.reserve(data->states.size());
    for (std::size_t i = 0; i < data->states.size(); ++i) {
        data->index.emplace(data->states[i], i);
    }
    data_ = std::move(data);
}

std::size_t FockBasis::index(const FockState &s) const {
    if (static_cast<int>(s.modes()) != modes() || s.photons() != photons()) {
        throw std::invalid_argument("FockBasis::index: state " + s.to_json() +
                                    " is not in the " + std::to_string(photons()) +
                                    "-photon, " + std::to_string(modes()) + "-mode sector");
    }
    return data_->index.at(s);
}

bool FockBasis::contains(const FockState &s) const {
    return static_cast<int>(s.modes()) == modes() && s.photons() == photons();
}

FockBasis enumerate_basis(int modes, int photons) { return FockBasis(modes, photons); }

std::uint64_t occupation_factorial(const FockState &s) {
    std::uint64_t result = 1;
    for (int v : s.occupations()) {
        for (int f = 2; f <= v; ++f) {
            if (__builtin_mul_overflow(result, static_cast<std::uint64_t>(f), &result)) {
                throw std::overflow_error("occupation_factorial overflows 64 bits for " +
                                          s.to_json());
            }
        }
    }
    return result;
}

std::vector<int> repeated_modes(const FockState &s) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(s.photons()));
    for (std::size_t i = 0; i < s.modes(); ++i) {
        out.insert(out.end(), static_cast<std::size_t>(s[i]), static_cast<int>(i));
    }
    return out;
}

CMatrix substitution_submatrix(const CMatrix &u, const FockState &s, const FockState &t) {
    if (s.photons() != t.photons()) {
        throw std::invalid_argument("substitution_submatrix: photon counts differ");
    }
    if (static_cast<Eigen::Index>(s.modes()) != u.rows() ||
        static_cast<Eigen::Index>(t.modes()) != u.cols()) {
        throw std::invalid_argument("substitution_submatrix: state length does not match matrix");
    }
    const auto rows = repeated_modes(s);
    const auto cols = repeated_modes(t);
    const auto n = static_cast<Eigen::Index>(rows.size());
    CMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = u(rows[i], cols[j]);
        }
    }
    return out;
}

}  // namespace photinject
