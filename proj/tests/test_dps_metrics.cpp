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

#include "dpskit/dps_metrics.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "dpskit/error.hpp"
#include "dpskit/random.hpp"
#include "test_util.hpp"

using namespace dpskit;

namespace {

/// psi = e0, phi = sqrt(f) e0 + sqrt(1-f) e1
std::pair<Vector, Vector> pair_with_overlap(int d, double f) {
    Vector a = Vector::Unit(d, 0);
    Vector b = std::sqrt(f) * a + std::sqrt(1 - f) * Vector::Unit(d, 1);
    return {a, b / b.norm()};
}

}  // namespace

TEST(dps_metrics, ClosedFormsMatchOracles) {
    Rng rng = make_rng(21);
    for (int d = 2; d <= 7; ++d) {
        std::uniform_real_distribution<double> unif(-1.0 / (d - 1), 1.0);
        for (int t = 0; t < 100; ++t) {
            DpsState a = DpsState::make(haar_state(d, rng), unif(rng));
            DpsState b = DpsState::make(haar_state(d, rng), unif(rng));
            EXPECT_NEAR(fidelity_closed(a, b), fidelity_oracle(a.density(), b.density()), 1e-9);
            EXPECT_NEAR(trace_distance_closed(a, b), trace_distance_oracle(a.density(), b.density()), 1e-9);
        }
    }
}

TEST(dps_metrics, EqualPolarizationTraceDistance) {
    // rho - sigma = p(|psi><psi| - |phi><phi|), whose eigenvalues are
    // +-|p| sqrt(1 - f).
    for (int d : {3, 9}) {
        for (double p : {-1.0 / (d * d - 1.0), 0.25, 1.0}) {
            for (double f : {0.0, 0.3, 0.9, 1.0}) {
                auto [psi, phi] = pair_with_overlap(d, f);
                DpsState a = DpsState::make(psi, p);
                DpsState b = DpsState::make(phi, p);
                EXPECT_NEAR(trace_distance_closed(a, b), std::abs(p) * std::sqrt(1 - f), 1e-12);
            }
        }
    }
}

TEST(dps_metrics, UniversalInverterPairAtZeroOverlap) {
    auto [psi, phi] = pair_with_overlap(9, 0.0);
    DpsState a = DpsState::make(psi, -1.0 / 80);
    DpsState b = DpsState::make(phi, -1.0 / 80);
    EXPECT_NEAR(trace_distance_closed(a, b), 1.0 / 80, 1e-14);
}

TEST(dps_metrics, IdenticalAndOrthogonal) {
    Rng rng = make_rng(22);
    Vector psi = haar_state(5, rng);
    DpsState a = DpsState::make(psi, 0.4);
    EXPECT_NEAR(fidelity_closed(a, a), 1.0, 1e-12);
    EXPECT_NEAR(trace_distance_closed(a, a), 0.0, 1e-12);
    auto [x, y] = pair_with_overlap(5, 0.0);
    EXPECT_NEAR(trace_distance_closed(DpsState::make(x, 1.0), DpsState::make(y, 1.0)), 1.0, 1e-14);
    EXPECT_NEAR(fidelity_closed(DpsState::make(x, 1.0), DpsState::make(y, 1.0)), 0.0, 1e-14);
}

TEST(dps_metrics, FuchsChainOnRandomPairs) {
    Rng rng = make_rng(23);
    for (int d = 2; d <= 9; ++d) {
        std::uniform_real_distribution<double> unif(-1.0 / (d - 1), 1.0);
        for (int t = 0; t < 50; ++t) {
            DistanceReport r = distance_report(DpsState::make(haar_state(d, rng), unif(rng)),
                                               DpsState::make(haar_state(d, rng), unif(rng)));
            EXPECT_LE(fuchs_violation(r), kFuchsTol);
            EXPECT_NEAR(r.bures, std::sqrt(2 - 2 * std::sqrt(r.fidelity)), 1e-15);
            EXPECT_NEAR(std::cos(r.angle), std::sqrt(r.fidelity), 1e-12);
        }
    }
}

TEST(dps_metrics, DistancesFromFlagsBrokenInputs) {
    DistanceReport r = distances_from(0.5, 0.95);
    EXPECT_GT(fuchs_violation(r), 0.1);
}

TEST(dps_metrics, StateValidation) {
    Vector v = Vector::Unit(3, 0);
    try {
        DpsState::make(v, -0.6);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::PolarizationOutOfRange);
    }
    try {
        DpsState::make(2.0 * v, 0.5);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonUnitVector);
    }
    EXPECT_NO_THROW(DpsState::make(v, -0.5));
    EXPECT_THROW(fidelity_closed(DpsState::make(v, 0.1), DpsState::make(Vector::Unit(4, 0), 0.1)), Error);
}

TEST(dps_metrics, PolarizationRanges) {
    EXPECT_DOUBLE_EQ(min_positive_polarization(3), -0.5);
    EXPECT_DOUBLE_EQ(min_physical_polarization(9), -1.0 / 80);
}
