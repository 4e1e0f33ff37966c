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

#include <optional>
#include <string>
#include <vector>

#include "dpskit/matrix_core.hpp"

namespace dpskit {

inline constexpr double kDpsStarTol = 1e-8;
inline constexpr double kDpsSpectrumTol = 1e-8;

struct StructureEntry {
    int i;
    int j;
    int k;
    double value;
};

/// Generalised Gell-Mann generators of su(D) together with the structure
/// tensors of the product rule
///
///     l_i l_j = (2/D) delta_ij 1 + i c_ijk l_k + d_ijk l_k.
///
/// Generator order: the D(D-1)/2 symmetric pair matrices E_jk + E_kj, then the
/// D(D-1)/2 antisymmetric ones -i E_jk + i E_kj (both with (j,k), j<k, in
/// lexicographic order), then the D-1 diagonal matrices. For D=2 these are
/// sigma_x, sigma_y, sigma_z. Indices are 0-based.
///
/// c and d are stored sparsely with every index permutation present, so a
/// contraction over (i,j) can walk the list once.
class SuBasis {
   public:
    static SuBasis generate(int dim);

    int dim() const {
        return dim_;
    }
    int size() const {
        return static_cast<int>(generators_.size());
    }
    const Matrix &generator(int i) const {
        return generators_.at(i);
    }
    const std::vector<Matrix> &generators() const {
        return generators_;
    }
    const std::vector<StructureEntry> &c_entries() const {
        return c_;
    }
    const std::vector<StructureEntry> &d_entries() const {
        return d_;
    }
    /// Dense lookups (linear scan; meant for tests and small D).
    double c(int i, int j, int k) const;
    double d(int i, int j, int k) const;

    /// sqrt(D(D-1)/2), the coherence-vector scale.
    double scale() const;

   private:
    int dim_ = 0;
    std::vector<Matrix> generators_;
    std::vector<StructureEntry> c_;
    std::vector<StructureEntry> d_;
};

SuBasis generate_basis(int dim);

struct CoherenceVector {
    int dim = 0;
    RealVector n;

    double norm() const {
        return n.norm();
    }
    double dot(const CoherenceVector &other) const;
};

/// n_i = sqrt(D / (2(D-1))) Tr(rho l_i).
CoherenceVector to_coherence(const DensityMatrix &rho, const SuBasis &basis);

/// rho = (1 + sqrt(D(D-1)/2) n.l) / D. Positivity is not checked.
DensityMatrix from_coherence(const CoherenceVector &n, const SuBasis &basis);

/// (a * b)_k = sqrt(D(D-1)/2) / (D-2) d_ijk a_i b_j. Throws UndefinedForDim2.
CoherenceVector star(const CoherenceVector &a, const CoherenceVector &b, const SuBasis &basis);

/// ([n*]^r n) . n for r = 0..r_max. Equals p^(r+2) for a DPS.
std::vector<double> invariant_ladder(const CoherenceVector &n, const SuBasis &basis, int r_max);

struct DpsTestOptions {
    double star_tol = kDpsStarTol;
    double spectrum_tol = kDpsSpectrumTol;
};

/// Full diagnostics of a DPS membership test.
struct DpsVerdict {
    std::optional<double> p;
    double coherence_norm = 0;
    /// |n*n - p n|; zero for D = 2 where the star product is undefined.
    double star_residual = 0;
    /// Largest deviation of the sorted spectrum from the pattern a, b, ..., b.
    double spectrum_residual = 0;
    double min_eigenvalue = 0;
    std::string reason;
};

DpsVerdict dps_verdict(const DensityMatrix &rho, const SuBasis &basis, const DpsTestOptions &opts = {});

/// Polarisation p when rho = (1-p) 1/D + p |psi><psi| within tolerance,
/// nothing otherwise. For D = 2 the sign is unobservable and p >= 0 is returned.
std::optional<double> dps_test(const DensityMatrix &rho, const SuBasis &basis, const DpsTestOptions &opts = {});

/// Sorted ascending spectrum of a DPS of polarisation p in dimension D.
RealVector dps_spectrum(int dim, double p);

}  // namespace dpskit
