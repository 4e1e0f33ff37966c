// Copyright 2026 The dpskit Authors
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

#include "dpskit/random.hpp"

#include <cmath>

namespace dpskit {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    constexpr std::uint64_t kStride = 0x9E3779B97F4A7C15ull;
    return Rng(seed + stream * kStride);
}

Matrix ginibre(int dim, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            double re = normal(rng);
            double im = normal(rng);
            g(i, j) = cdouble(re, im) / std::sqrt(2.0);
        }
    }
    return g;
}

Matrix haar_unitary(int dim, Rng &rng) {
    Matrix g = ginibre(dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < dim; ++k) {
        cdouble d = r(k, k);
        if (std::abs(d) > 0) {
            q.col(k) *= d / std::abs(d);
        }
    }
    return q;
}

Vector haar_state(int dim, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
        double re = normal(rng);
        double im = normal(rng);
        v[i] = cdouble(re, im);
    }
    return v / v.norm();
}

Matrix random_hermitian(int dim, Rng &rng) {
    Matrix g = ginibre(dim, rng);
    return 0.5 * (g + g.adjoint());
}

DensityMatrix random_density(int dim, Rng &rng) {
    Matrix g = ginibre(dim, rng);
    Matrix w = g * g.adjoint();
    w /= w.trace().real();
    return DensityMatrix::from_matrix(0.5 * (w + w.adjoint()));
}

}  // namespace dpskit
