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
#include "photinject/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "photinject/parallel.hpp"
#include "photinject/rng.hpp"

namespace photinject {
namespace {

void require_square(const CMatrix &a, const char *what) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix is not square (" +
                                    std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + ")");
    }
}

/// Neumaier summation applied to each component.
class CompensatedSum {
  public:
    void add(Complex x) {
        add_real(sum_re_, c_re_, x.real());
        add_real(sum_im_, c_im_, x.imag());
    }
    Complex value() const { return {sum_re_ + c_re_, sum_im_ + c_im_}; }

  private:
    static void add_real(double &sum, double &comp, double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double sum_re_ = 0.0, c_re_ = 0.0, sum_im_ = 0.0, c_im_ = 0.0;
};

}  // namespace

Complex permanent_exact(const CMatrix &a, int cap) {
    require_square(a, "permanent_exact");
    const auto n = a.rows();
    if (n > cap) {
        throw std::length_error("permanent_exact: size " + std::to_string(n) +
                                " exceeds cap " + std::to_string(cap));
    }
    if (n == 0) {
        return {1.0, 0.0};
    }
    if (n == 1) {
        return a(0, 0);
    }
    // Glynn: per(A) = 2^{1-n} sum_{d, d_0 = +1} (prod_k d_k) prod_j (sum_i d_i a_ij).
    std::vector<Complex> col_sums(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        col_sums[j] = a.col(j).sum();
    }
    std::vector<int> delta(static_cast<std::size_t>(n), 1);
    int sign = 1;
    CompensatedSum total;
    auto term = [&] {
        Complex prod = col_sums[0];
        for (Eigen::Index j = 1; j < n; ++j) {
            prod *= col_sums[j];
        }
        return sign > 0 ? prod : -prod;
    };
    total.add(term());
    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    for (std::uint64_t g = 1; g < steps; ++g) {
        // Row to flip: lowest set bit of the Gray-code counter, offset by one
        // because row 0 keeps d_0 = +1.
        const int row = std::countr_zero(g) + 1;
        const double factor = delta[row] > 0 ? -2.0 : 2.0;
        delta[row] = -delta[row];
        sign = -sign;
        for (Eigen::Index j = 0; j < n; ++j) {
            col_sums[j] += factor * a(row, j);
        }
        total.add(term());
    }
    return total.value() / std::ldexp(1.0, static_cast<int>(n - 1));
}

Complex permanent_naive(const CMatrix &a) {
    require_square(a, "permanent_naive");
    const auto n = a.rows();
    if (n > kPermanentNaiveCap) {
        throw std::length_error("permanent_naive: size " + std::to_string(n) +
                                " exceeds oracle cap " + std::to_string(kPermanentNaiveCap));
    }
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    Complex total{0.0, 0.0};
    do {
        Complex prod{1.0, 0.0};
        for (Eigen::Index i = 0; i < n; ++i) {
            prod *= a(i, perm[i]);
        }
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

Complex permanent_derivative(const CMatrix &a, const CMatrix &direction, int cap) {
    require_square(a, "permanent_derivative");
    if (direction.rows() != a.rows() || direction.cols() != a.cols()) {
        throw std::invalid_argument("permanent_derivative: direction shape mismatch");
    }
    Complex total{0.0, 0.0};
    CMatrix work = a;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        work.row(i) = direction.row(i);
        total += permanent_exact(work, cap);
        work.row(i) = a.row(i);
    }
    return total;
}

namespace {

struct StreamMoments {
    std::uint64_t count = 0;
    Complex mean{0.0, 0.0};
    double m2 = 0.0;  // sum of |x - mean|^2

    void push(Complex x) {
        ++count;
        const Complex d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += std::real(std::conj(d) * (x - mean));
    }

    void merge(const StreamMoments &o) {
        if (o.count == 0) {
            return;
        }
        if (count == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(o.count);
        const Complex d = o.mean - mean;
        const double n = na + nb;
        mean += d * (nb / n);
        m2 += o.m2 + std::norm(d) * na * nb / n;
        count += o.count;
    }
};

constexpr std::uint64_t kGurvitsStreams = 64;

}  // namespace

PermanentEstimate gurvits_estimate(const CMatrix &a, std::uint64_t samples, std::uint64_t seed) {
    require_square(a, "gurvits_estimate");
    if (samples == 0) {
        throw std::invalid_argument("gurvits_estimate: samples must be >= 1");
    }
    const auto n = a.rows();
    const std::uint64_t streams = std::min(samples, kGurvitsStreams);
    std::vector<StreamMoments> partial(streams);
    parallel_for(streams, [&](std::size_t s) {
        const std::uint64_t begin = samples * s / streams;
        const std::uint64_t end = samples * (s + 1) / streams;
        Rng rng(derive_seed(seed, s));
        std::vector<double> x(static_cast<std::size_t>(n));
        StreamMoments moments;
        for (std::uint64_t k = begin; k < end; ++k) {
            double sign_product = 1.0;
            for (auto &xi : x) {
                xi = rng.sign();
                sign_product *= xi;
            }
            Complex prod{sign_product, 0.0};
            for (Eigen::Index j = 0; j < n; ++j) {
                Complex col{0.0, 0.0};
                for (Eigen::Index i = 0; i < n; ++i) {
                    col += x[i] * a(i, j);
                }
                prod *= col;
            }
            moments.push(prod);
        }
        partial[s] = moments;
    });
    StreamMoments total;
    for (const auto &p : partial) {
        total.merge(p);
    }
    PermanentEstimate est;
    est.value = total.mean;
    est.samples = total.count;
    est.empirical_std_error =
        total.count > 1
            ? std::sqrt(total.m2 / static_cast<double>(total.count - 1) /
                        static_cast<double>(total.count))
            : std::numeric_limits<double>::infinity();
    return est;
}

}  // namespace photinject
