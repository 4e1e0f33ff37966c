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

#include "dpskit/moments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "dpskit/error.hpp"
#include "dpskit/random.hpp"

namespace dpskit {

namespace {

using ldcomplex = std::complex<long double>;

std::vector<int> default_cycle(int m) {
    std::vector<int> perm(m);
    for (int k = 0; k < m; ++k) {
        perm[k] = (k + 1) % m;
    }
    return perm;
}

void require_permutation(std::span<const int> perm) {
    const int m = static_cast<int>(perm.size());
    std::vector<bool> hit(m, false);
    for (int x : perm) {
        if (x < 0 || x >= m || hit[x]) {
            throw Error(ErrorCode::InvalidArgument, "not a permutation of the copies");
        }
        hit[x] = true;
    }
}

bool is_single_cycle(std::span<const int> perm) {
    const int m = static_cast<int>(perm.size());
    int at = 0;
    for (int step = 1; step <= m; ++step) {
        at = perm[at];
        if (at == 0) {
            return step == m;
        }
    }
    return false;
}

long long checked_power(int dim, int m) {
    long long size = 1;
    for (int k = 0; k < m; ++k) {
        size *= dim;
        if (size > kMaxPermutationSize) {
            std::ostringstream msg;
            msg << "D^m = " << dim << "^" << m << " exceeds " << kMaxPermutationSize;
            throw Error(ErrorCode::DimensionTooLarge, msg.str());
        }
    }
    return size;
}

}  // namespace

std::string_view to_string(MomentMethod method) {
    switch (method) {
        case MomentMethod::Exact: return "exact";
        case MomentMethod::Permutation: return "permutation";
        case MomentMethod::MonteCarlo: return "montecarlo";
    }
    return "unknown";
}

MomentEstimate moment_exact(const DensityMatrix &rho, int m) {
    if (m < 1) {
        throw Error(ErrorCode::InvalidArgument, "moment_exact: m < 1");
    }
    RealVector ev = eigenvalues_hermitian(rho.matrix());
    double s = 0;
    for (double v : ev) {
        s += std::pow(v, m);
    }
    return MomentEstimate{m, s, MomentMethod::Exact, 0, 0.0};
}

double permutation_trace(const Matrix &rho, std::span<const int> perm) {
    require_permutation(perm);
    const int m = static_cast<int>(perm.size());
    const int d = static_cast<int>(rho.rows());
    const long long total = checked_power(d, m);
    // With P|i> = |i_perm[0] ... i_perm[m-1]>, Tr(P rho^m) = sum_i prod_k rho(i_k, i_perm[k]).
    std::vector<int> idx(m, 0);
    cdouble sum = 0;
    for (long long n = 0; n < total; ++n) {
        long long rest = n;
        for (int k = m - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(rest % d);
            rest /= d;
        }
        cdouble term = 1.0;
        for (int k = 0; k < m; ++k) {
            term *= rho(idx[k], idx[perm[k]]);
        }
        sum += term;
    }
    return sum.real();
}

Matrix permutation_operator(int dim, std::span<const int> perm) {
    require_permutation(perm);
    const int m = static_cast<int>(perm.size());
    const long long total = checked_power(dim, m);
    Matrix p = Matrix::Zero(total, total);
    std::vector<int> idx(m), out(m);
    for (long long n = 0; n < total; ++n) {
        long long rest = n;
        for (int k = m - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(rest % dim);
            rest /= dim;
        }
        long long row = 0;
        for (int k = 0; k < m; ++k) {
            row = row * dim + idx[perm[k]];
        }
        p(row, n) = 1.0;
    }
    return p;
}

MomentEstimate moment_permutation(const DensityMatrix &rho, int m, std::span<const int> perm) {
    if (m < 2) {
        throw Error(ErrorCode::InvalidArgument, "moment_permutation: m < 2");
    }
    std::vector<int> cycle = perm.empty() ? default_cycle(m) : std::vector<int>(perm.begin(), perm.end());
    if (static_cast<int>(cycle.size()) != m) {
        throw Error(ErrorCode::InvalidArgument, "moment_permutation: permutation length != m");
    }
    require_permutation(cycle);
    if (!is_single_cycle(cycle)) {
        throw Error(ErrorCode::InvalidArgument, "moment_permutation: permutation has an invariant subset of copies");
    }
    return MomentEstimate{m, permutation_trace(rho.matrix(), cycle), MomentMethod::Permutation, 0, 0.0};
}

MomentEstimate moment_montecarlo(const DensityMatrix &rho, int m, long long shots, std::uint64_t seed) {
    if (shots < 1) {
        throw Error(ErrorCode::InvalidArgument, "moment_montecarlo: shots < 1");
    }
    const double t = std::clamp(moment_exact(rho, m).value, -1.0, 1.0);
    // One stream per m so several moments from one seed are independent.
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(m));
    std::binomial_distribution<long long> plus(shots, (1.0 + t) / 2.0);
    const long long k = plus(rng);
    const double value = 2.0 * static_cast<double>(k) / static_cast<double>(shots) - 1.0;
    const double se = std::sqrt(std::max(0.0, 1.0 - t * t) / static_cast<double>(shots));
    return MomentEstimate{m, value, MomentMethod::MonteCarlo, shots, se};
}

double dps_moment(int dim, double p, int m) {
    const double d = dim;
    return (std::pow(1.0 + (d - 1.0) * p, m) + (d - 1.0) * std::pow(1.0 - p, m)) / std::pow(d, m);
}

MomentFit dps_p_from_moments(double t2, double t3, int dim, double tol) {
    if (dim < 2) {
        throw Error(ErrorCode::InvalidDimension, "dps_p_from_moments: D < 2");
    }
    const double a = (dim * t2 - 1.0) / (dim - 1.0);
    if (a < -tol || a > 1.0 + tol) {
        std::ostringstream msg;
        msg << "t2 = " << t2 << " gives p^2 = " << a;
        throw Error(ErrorCode::InconsistentMoments, msg.str());
    }
    const double mag = std::min(1.0, std::sqrt(std::max(0.0, a)));
    const double lo = -1.0 / (dim - 1.0);

    MomentFit best;
    bool found = false;
    int fits = 0;
    for (double cand : {mag, -mag}) {
        if (cand < lo - tol) {
            continue;
        }
        const double res = std::abs(t3 - dps_moment(dim, cand, 3));
        if (res > tol) {
            continue;
        }
        ++fits;
        if (!found || res < best.t3_residual) {
            best.p = cand;
            best.t3_residual = res;
            found = true;
        }
        if (mag == 0) {
            break;
        }
    }
    if (!found) {
        std::ostringstream msg;
        msg << "no p in [" << lo << ", 1] fits t2 = " << t2 << ", t3 = " << t3;
        throw Error(ErrorCode::InconsistentMoments, msg.str());
    }
    if (dim == 2) {
        // Both signs give the same spectrum.
        best.p = mag;
        best.t3_residual = std::abs(t3 - dps_moment(dim, mag, 3));
        best.sign_resolved = false;
    } else {
        best.sign_resolved = fits == 1;
    }
    return best;
}

CharpolyCount count_positive_charpoly(const Matrix &m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::NonSquare, "count_positive_charpoly");
    }
    const double herm = hermiticity_residual(m);
    if (herm > kEigInputTol) {
        std::ostringstream msg;
        msg << "count_positive_charpoly: |M - M^dagger|_max = " << herm;
        throw Error(ErrorCode::NonHermitian, msg.str());
    }
    const int n = static_cast<int>(m.rows());
    using LMatrix = Eigen::Matrix<ldcomplex, Eigen::Dynamic, Eigen::Dynamic>;
    LMatrix a = m.cast<ldcomplex>();
    LMatrix id = LMatrix::Identity(n, n);

    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} 1, c_{n-k} = -Tr(A M_k)/k.
    std::vector<long double> c(n + 1, 0.0L);
    c[n] = 1.0L;
    LMatrix mk = LMatrix::Zero(n, n);
    for (int k = 1; k <= n; ++k) {
        mk = a * mk + c[n - k + 1] * id;
        c[n - k] = -(a * mk).trace().real() / k;
    }

    RealVector ev = eigenvalues_hermitian(m);
    CharpolyCount out;
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (double v : ev) {
        if (std::abs(v) < kCharpolyZeroTol) {
            out.indeterminate = true;
        }
    }
    // A coefficient this far below the size of e_{n-k} is numerically zero.
    long double binom = 1.0L;
    int last_sign = 0;
    for (int k = n; k >= 0; --k) {
        out.coefficients.insert(out.coefficients.begin(), static_cast<double>(c[k]));
        const long double bound = 1e-14L * binom * std::pow(static_cast<long double>(scale), n - k);
        binom = binom * k / (n - k + 1);
        if (std::abs(c[k]) <= bound) {
            continue;
        }
        const int sign = c[k] > 0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) {
            ++out.positive;
        }
        last_sign = sign;
    }
    return out;
}

}  // namespace dpskit
