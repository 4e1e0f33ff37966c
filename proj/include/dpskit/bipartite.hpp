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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpskit/bloch.hpp"
#include "dpskit/dps_metrics.hpp"
#include "dpskit/matrix_core.hpp"

namespace dpskit {

/// PT eigenvalues in (-kNegTol, 0) count as zero.
inline constexpr double kNegTol = 1e-10;
inline constexpr double kConsistencyTol = 1e-8;

/// (U (x) V)|psi> = sum_j b_j |j>|j>, b descending and nonnegative.
/// For degenerate b the unitaries are only fixed up to rotations inside the
/// degenerate block, so compare b and reconstructed states, not U, V.
struct SchmidtForm {
    int dA = 0;
    int dB = 0;
    RealVector b;
    Matrix U;
    Matrix V;

    /// sum_j b_j |j>|j> in the product basis.
    Vector canonical_state() const;
    /// (U (x) V)^dagger applied to canonical_state().
    Vector reconstruct() const;
};

SchmidtForm schmidt_pure(const Vector &psi, int dA, int dB);

struct DpsSchmidt {
    double p = 0;
    Vector purification;
    SchmidtForm form;
};

/// Recovers p and the unique purification of a bipartite DPS, then its
/// Schmidt form. Throws NotDPS or AmbiguousAtPZero.
DpsSchmidt schmidt_dps(const DensityMatrix &rho, int dA, int dB, const SuBasis &basis,
                       const DpsTestOptions &opts = {});

/// Rebuilds (1-p) 1/D + p |psi><psi| from a Schmidt form.
DensityMatrix dps_from_schmidt(double p, const SchmidtForm &form);

/// Marginal spectrum {(1-p)/dX + p b_i^2}_{i<n} U {(1-p)/dX}^(dX-n), ascending.
RealVector reduced_spectrum_dps(double p, std::span<const double> b, int dX, int n_nonzero);

enum class ConsistencyVerdict { Consistent, Rejected };

struct ConsistencyReport {
    ConsistencyVerdict verdict = ConsistencyVerdict::Rejected;
    std::string reason;
    /// A (p, b) pair explaining both marginals, when one was found.
    std::optional<double> p;
    std::vector<double> b;
};

/// Necessary conditions for (rho_A, rho_B) to be marginals of a DPS. A
/// Consistent verdict does not prove DPS form.
ConsistencyReport consistency_check(const DensityMatrix &rhoA, const DensityMatrix &rhoB,
                                    double tol = kConsistencyTol);

/// Closed-form spectrum of the partial transpose of a DPS with Schmidt data
/// (p, b), D = dA dB. Ascending.
RealVector pt_spectrum_closed(double p, std::span<const double> b, int dA, int dB);

struct EntanglementReport {
    RealVector pt_spectrum;
    double negativity = 0;
    int negative_count = 0;
    /// dA(dA-1)/2
    int bound = 0;
    /// PPT verdict: false means "not detected", never "separable".
    bool entangled = false;
    /// 1/(D b_j b_j' + 1) for the largest pair product.
    double pair_threshold = 1;
    /// 1/(D/2 + 1), below which every DPS is PPT.
    double universal_threshold = 1;
    std::string caveat;
};

/// Negativity (|rho^T_B|_tr - 1)/(dA - 1) from the closed-form PT spectrum.
EntanglementReport negativity(double p, std::span<const double> b, int dA, int dB, double neg_tol = kNegTol);

/// The same report for an arbitrary bipartite state, by brute-force PT.
EntanglementReport entanglement_of(const DensityMatrix &rho, int dA, int dB, double neg_tol = kNegTol);

struct TwoQubitCanonical {
    DensityMatrix rho;
    std::array<double, 4> mu;
};

/// Two-qubit DPS in the (p, Omega) canonical form, with the four PT
/// eigenvalues mu_1..mu_4 (mu_4 is the only one that can go negative for p > 0).
TwoQubitCanonical two_qubit_canonical(double p, double omega);

/// mu_4 < 0 predicted by p > 1/3 and sin(Omega) > (1-p)/(2p).
bool two_qubit_entangled_condition(double p, double omega);

struct IsotropicState {
    DpsState state;
    double p;
    /// F <= 1/dA
    bool separable;
};

/// DPS over |Phi+> with p = (dA^2 F - 1)/(dA^2 - 1). Throws FOutOfRange.
IsotropicState isotropic(int dA, double F);

/// |Phi+> = sum_j |jj> / sqrt(d)
Vector max_entangled(int d);

}  // namespace dpskit
