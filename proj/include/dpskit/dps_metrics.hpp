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

#include "dpskit/matrix_core.hpp"

namespace dpskit {

inline constexpr double kFuchsTol = 1e-9;

/// rho = (1-p) 1/D + p |psi><psi| with -1/(D-1) <= p <= 1.
class DpsState {
   public:
    /// Throws NonUnitVector or PolarizationOutOfRange.
    static DpsState make(const Vector &pure, double p);

    int dim() const {
        return static_cast<int>(pure_.size());
    }
    const Vector &pure() const {
        return pure_;
    }
    double p() const {
        return p_;
    }
    DensityMatrix density() const;

   private:
    DpsState(Vector pure, double p) : pure_(std::move(pure)), p_(p) {
    }
    Vector pure_;
    double p_;
};

/// -1/(D-1): the smallest p giving a positive operator.
double min_positive_polarization(int dim);
/// -1/(D^2-1): the smallest p reachable by a completely positive map.
double min_physical_polarization(int dim);

/// |<psi|phi>|^2 recomputed from the stored purifications.
double purification_overlap(const DpsState &a, const DpsState &b);

/// Fidelity of two DPS from the analytic square-root formula in the
/// parameters a, b, c, d (both +/- branches summed).
double fidelity_closed(const DpsState &rho, const DpsState &sigma);

/// Tr[sqrt(sqrt(rho) sigma sqrt(rho))]^2, clipped to [0,1].
double fidelity_oracle(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Trace distance of two DPS from the analytic formula.
double trace_distance_closed(const DpsState &rho, const DpsState &sigma);

/// (1/2) |rho - sigma|_tr.
double trace_distance_oracle(const DensityMatrix &rho, const DensityMatrix &sigma);

struct DistanceReport {
    double fidelity = 1;
    double trace_distance = 0;
    double bures = 0;
    double angle = 0;
};

/// Bures metric sqrt(2 - 2 sqrt(F)) and angle arccos(sqrt(F)) for given F.
DistanceReport distances_from(double fidelity, double trace_distance);

/// Largest violation of B^2/2 <= T <= sqrt(1 - F); <= 0 means the chain holds.
double fuchs_violation(const DistanceReport &r);

/// All four measures from the closed forms. Throws InequalityViolation if the
/// Fuchs-van de Graaf chain fails by more than kFuchsTol, which can only
/// happen through an implementation bug.
DistanceReport distance_report(const DpsState &rho, const DpsState &sigma);

}  // namespace dpskit
