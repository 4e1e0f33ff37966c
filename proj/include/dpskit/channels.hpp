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
#include <vector>

#include "dpskit/matrix_core.hpp"

namespace dpskit {

inline constexpr double kTracePreservingTol = 1e-10;

/// rho -> sum_m K_m rho K_m^dagger, trace preserving.
class KrausChannel {
   public:
    /// Throws NotTracePreserving if |sum K^dagger K - 1|_max > tol.
    static KrausChannel make(std::vector<Matrix> kraus, double tol = kTracePreservingTol);
    static KrausChannel identity(int dim);
    static KrausChannel unitary(const Matrix &u);

    int dim() const {
        return dim_;
    }
    const std::vector<Matrix> &kraus() const {
        return kraus_;
    }
    /// max |sum K^dagger K - 1|
    double tp_residual() const;
    /// Linear action, valid for any operator (not only states).
    Matrix apply(const Matrix &m) const;
    DensityMatrix apply(const DensityMatrix &rho) const;

   private:
    KrausChannel(int dim, std::vector<Matrix> kraus) : dim_(dim), kraus_(std::move(kraus)) {
    }
    int dim_;
    std::vector<Matrix> kraus_;
};

/// Shift X = sum |j+1><j| and clock Z = sum w^j |j><j|, w = exp(2 pi i / D).
struct WeylBasis {
    int dim = 0;
    Matrix X;
    Matrix Z;

    static WeylBasis make(int dim);
    /// X^a Z^b, exponents taken mod D.
    Matrix weyl(int a, int b) const;
};

/// |chi> = alpha |Phi+> + beta |0> (sum_j |j>)/sqrt(D) on two ancillas a1 a2.
struct ChiState {
    int dim = 0;
    cdouble alpha;
    cdouble beta;

    /// Validates |alpha|^2 + |beta|^2 + 2 Re(alpha beta*)/D = 1 (1e-12) and
    /// |beta|^2 <= D^2/(D^2-1).
    static ChiState make(int dim, cdouble alpha, cdouble beta);
    /// Real beta = sqrt(beta2) and the real alpha >= -beta/D solving the norm
    /// constraint.
    static ChiState from_beta2(int dim, double beta2);
    /// Amplitudes on a1 (x) a2.
    Vector vector() const;
};

struct DepolarizedState {
    DensityMatrix rho;
    /// -1/(D^2-1) <= p <= 1, i.e. reachable by a completely positive map.
    bool physically_realizable;
};

/// (1-p) 1/D + p rho for -1/(D-1) <= p <= 1.
DepolarizedState apply_depolarizing(const DensityMatrix &rho, double p);

/// Kraus form of the depolarizing map over the Weyl operators. Throws
/// PolarizationOutOfRange outside the CP range [-1/(D^2-1), 1].
KrausChannel depolarizing_channel(int dim, double p);

/// Identity with probability f, X with probability 1-f.
KrausChannel shift_channel(int dim, double f);

/// The three-qudit unitary on S (x) a1 (x) a2 built from controlled shifts.
Matrix protocol1_unitary(int dim);

/// Tr_{a1 a2}[U (|psi><psi| (x) |chi><chi|) U^dagger].
DensityMatrix protocol1(const Vector &psi, const ChiState &chi);

/// (1 - |beta|^2) |psi><psi| + |beta|^2 1/D
DensityMatrix protocol1_formula(const Vector &psi, const ChiState &chi);

/// (E (x) 1)(|Phi+><Phi+|), D^2 x D^2.
DensityMatrix jamiolkowski_state(const KrausChannel &ch);

/// <Phi+| E_ch |Phi+> = sum_m |Tr K_m|^2 / D^2.
double jamiolkowski_fidelity(const KrausChannel &ch);

/// exp(i alpha (X + X^dagger))
Matrix weyl_cosine_unitary(int dim, double alpha);

/// |sum_j exp(2 i alpha cos(2 pi j / D))|^2 / D^2
double weyl_cosine_fidelity(int dim, double alpha);

/// (D^2 f - 1)/(D^2 - 1)
double p_from_fidelity(int dim, double f);

/// Clifford group modulo global phase, D in {2, 3}. Throws UnsupportedDimension.
std::vector<Matrix> clifford_group(int dim);

/// true if u P u^dagger is a phase times a Weyl operator for every Weyl P.
bool normalizes_weyl_group(const Matrix &u, double tol = 1e-9);

enum class TwirlMode {
    /// Uniform average over the full Clifford group.
    ExactClifford,
    /// Uniform average over the Clifford group without the identity.
    CliffordWithoutIdentity,
    /// Seeded Haar-random unitaries.
    HaarSample,
};

struct TwirlResult {
    KrausChannel channel;
    double p_hat = 0;
    /// 0 for the group modes.
    double std_error = 0;
    /// max over matrix units E_ij of |E'(E_ij) - depolarize(E_ij, p_hat)|_max.
    double depolarizing_residual = 0;
    int samples = 0;
};

/// rho -> avg_U U^dagger E(U rho U^dagger) U. The group modes report
/// p_hat = (D^2 f' - 1)/(D^2 - 1) from the averaged channel; HaarSample
/// reports the sample mean of (D <j|U^dagger E(U|j><j|U^dagger) U|j> - 1)/(D - 1)
/// over all probes j.
TwirlResult twirl(const KrausChannel &ch, TwirlMode mode, int samples = 0, std::uint64_t seed = 0);

struct RecipeResult {
    DensityMatrix rho;
    double p_expected = 0;
    double p_estimate = 0;
    double std_error = 0;
};

/// Empirical average of U^dagger E_f(U |psi><psi| U^dagger) U over seeded
/// Haar U, E_f applying X with probability 1-f. Throws FOutOfRange.
RecipeResult pdps_recipe(const Vector &psi, double f, std::uint64_t seed, int trials);

/// (E_pA (x) E_pB)(rho). Throws PolarizationOutOfRange outside the local CP
/// ranges.
DensityMatrix local_depolarize(const DensityMatrix &rho, int dA, int dB, double pA, double pB);

}  // namespace dpskit
