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

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dpskit/matrix_core.hpp"

namespace dpskit {

/// Largest D^m the permutation contraction will touch.
inline constexpr long long kMaxPermutationSize = 4096;
inline constexpr double kMomentFitTol = 1e-8;
inline constexpr double kCharpolyZeroTol = 1e-10;

enum class MomentMethod { Exact, Permutation, MonteCarlo };

std::string_view to_string(MomentMethod method);

struct MomentEstimate {
    int m = 0;
    double value = 0;
    MomentMethod method = MomentMethod::Exact;
    /// 0 for the deterministic methods.
    long long shots = 0;
    double std_error = 0;
};

/// sum_i lambda_i^m
MomentEstimate moment_exact(const DensityMatrix &rho, int m);

/// Tr(P rho^(x)m) with P permuting the m copies, P|i_1..i_m> = |i_perm[0]..i_perm[m-1]>.
/// Computed by index contraction without building P. Throws DimensionTooLarge
/// if D^m > kMaxPermutationSize.
double permutation_trace(const Matrix &rho, std::span<const int> perm);

/// The D^m x D^m permutation operator itself (small sizes only).
Matrix permutation_operator(int dim, std::span<const int> perm);

/// Tr(rho^m) through the permutation identity. perm must be a single m-cycle;
/// empty means the cyclic shift k -> k+1.
MomentEstimate moment_permutation(const DensityMatrix &rho, int m, std::span<const int> perm = {});

/// Swap-test statistics: `shots` ancilla outcomes, +1 with probability
/// (1 + t)/2, t = Tr(rho^m). value = 2 (#plus / shots) - 1 and
/// std_error = sqrt((1 - t^2)/shots).
MomentEstimate moment_montecarlo(const DensityMatrix &rho, int m, long long shots, std::uint64_t seed);

/// Tr(rho^m) for the DPS spectrum with polarization p.
double dps_moment(int dim, double p, int m);

struct MomentFit {
    double p = 0;
    bool sign_resolved = false;
    /// |t3 - dps_moment(D, p, 3)| at the returned p.
    double t3_residual = 0;
};

/// |p| from t2, sign from t3. For D = 2 the sign is never resolved and the
/// nonnegative root is returned. Throws InconsistentMoments.
MomentFit dps_p_from_moments(double t2, double t3, int dim, double tol = kMomentFitTol);

struct CharpolyCount {
    int positive = 0;
    /// Some eigenvalue lies in (-kCharpolyZeroTol, kCharpolyZeroTol).
    bool indeterminate = false;
    /// det(x 1 - M) = sum_k coefficients[k] x^k
    std::vector<double> coefficients;
};

/// Sign changes of the characteristic polynomial coefficients (Faddeev-LeVerrier
/// in long double), which count positive eigenvalues. Throws NonHermitian.
CharpolyCount count_positive_charpoly(const Matrix &m);

}  // namespace dpskit
