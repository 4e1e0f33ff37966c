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

#include "dpskit/matrix_core.hpp"

#include "gtest/gtest.h"

#include "dpskit/error.hpp"
#include "dpskit/random.hpp"
#include "test_util.hpp"

using namespace dpskit;

TEST(matrix_core, EigHermitianReconstructs) {
    Rng rng = make_rng(1);
    for (int d = 1; d <= 12; ++d) {
        Matrix h = random_hermitian(d, rng);
        Spectrum s = eig_hermitian(h);
        Matrix back = s.vectors * s.values.cast<cdouble>().asDiagonal() * s.vectors.adjoint();
        EXPECT_LT(test::max_abs(back - h), 1e-12) << d;
        EXPECT_LT(test::max_abs(s.vectors.adjoint() * s.vectors - Matrix::Identity(d, d)), 1e-12);
        for (Eigen::Index i = 1; i < s.values.size(); ++i) {
            EXPECT_LE(s.values[i - 1], s.values[i]);
        }
        auto ref = test::sorted_eigs(h);
        for (int i = 0; i < d; ++i) {
            EXPECT_NEAR(s.values[i], ref[i], 1e-11);
        }
    }
}

TEST(matrix_core, EigHermitianDegenerateSpectrum) {
    Rng rng = make_rng(2);
    Matrix u = haar_unitary(5, rng);
    RealVector vals(5);
    vals << 0.1, 0.1, 0.1, 0.3, 0.4;
    Matrix h = u * vals.cast<cdouble>().asDiagonal() * u.adjoint();
    Spectrum s = eig_hermitian(h);
    EXPECT_LT(test::max_abs(s.vectors.adjoint() * s.vectors - Matrix::Identity(5, 5)), 1e-12);
    EXPECT_NEAR(s.values[0], 0.1, 1e-13);
    EXPECT_NEAR(s.values[2], 0.1, 1e-13);
}

TEST(matrix_core, EigRejectsNonHermitian) {
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    try {
        eig_hermitian(m);
        FAIL() << "expected NonHermitian";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonHermitian);
    }
    EXPECT_THROW(eig_hermitian(Matrix::Zero(2, 3)), Error);
}

TEST(matrix_core, SqrtPsdSquaresBack) {
    Rng rng = make_rng(3);
    for (int d = 2; d <= 6; ++d) {
        DensityMatrix rho = random_density(d, rng);
        Matrix r = sqrt_psd(rho.matrix());
        EXPECT_LT(test::max_abs(r * r - rho.matrix()), 1e-12);
    }
    Matrix neg = -Matrix::Identity(2, 2);
    EXPECT_THROW(sqrt_psd(neg), Error);
}

TEST(matrix_core, TraceNormMatchesSingularValues) {
    Rng rng = make_rng(4);
    for (int d = 2; d <= 6; ++d) {
        Matrix h = random_hermitian(d, rng);
        Eigen::JacobiSVD<Matrix> svd(h);
        EXPECT_NEAR(trace_norm(h), svd.singularValues().sum(), 1e-11);
        Matrix g = ginibre(d, rng);
        Eigen::JacobiSVD<Matrix> svd2(g);
        EXPECT_NEAR(trace_norm(g), svd2.singularValues().sum(), 1e-11);
    }
}

TEST(matrix_core, PartialTraceOfProduct) {
    Rng rng = make_rng(5);
    DensityMatrix a = random_density(2, rng);
    DensityMatrix b = random_density(3, rng);
    Matrix ab = tensor(a.matrix(), b.matrix());
    EXPECT_LT(test::max_abs(partial_trace(ab, 2, 3, Subsystem::A) - a.matrix()), 1e-14);
    EXPECT_LT(test::max_abs(partial_trace(ab, 2, 3, Subsystem::B) - b.matrix()), 1e-14);
    EXPECT_THROW(partial_trace(ab, 3, 3, Subsystem::A), Error);
}

TEST(matrix_core, PartialTransposeOfProduct) {
    Rng rng = make_rng(6);
    Matrix a = ginibre(3, rng);
    Matrix b = ginibre(2, rng);
    Matrix ab = tensor(a, b);
    EXPECT_LT(test::max_abs(partial_transpose(ab, 3, 2, Subsystem::B) - tensor(a, Matrix(b.transpose()))), 1e-14);
    EXPECT_LT(test::max_abs(partial_transpose(ab, 3, 2, Subsystem::A) - tensor(Matrix(a.transpose()), b)), 1e-14);
    Matrix twice = partial_transpose(partial_transpose(ab, 3, 2, Subsystem::B), 3, 2, Subsystem::B);
    EXPECT_LT(test::max_abs(twice - ab), 1e-15);
}

TEST(matrix_core, TensorIndexingIsAMajor) {
    Vector a = Vector::Unit(2, 1);
    Vector b = Vector::Unit(3, 2);
    Vector ab = tensor(a, b);
    EXPECT_EQ(ab.size(), 6);
    EXPECT_EQ(ab[1 * 3 + 2], cdouble(1));
}

TEST(matrix_core, DensityMatrixValidation) {
    Matrix m = Matrix::Identity(2, 2);
    try {
        DensityMatrix::from_matrix(m);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonUnitTrace);
    }
    Matrix h(2, 2);
    h << 0.5, 0.1, 0.2, 0.5;
    try {
        DensityMatrix::from_matrix(h);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonHermitian);
        EXPECT_NE(std::string(e.what()).find("NonHermitian"), std::string::npos);
    }
    DensityMatrix mm = DensityMatrix::maximally_mixed(4);
    EXPECT_NEAR(mm.matrix().trace().real(), 1.0, 1e-15);
    EXPECT_TRUE(mm.is_positive());
}

TEST(matrix_core, FromPureIsProjector) {
    Rng rng = make_rng(7);
    Vector psi = haar_state(5, rng);
    DensityMatrix rho = DensityMatrix::from_pure(psi);
    EXPECT_LT(test::max_abs(rho.matrix() * rho.matrix() - rho.matrix()), 1e-14);
}

TEST(random, SeededStreamsAreReproducible) {
    Rng a = make_rng(42);
    Rng b = make_rng(42);
    EXPECT_EQ(test::max_abs(haar_unitary(4, a) - haar_unitary(4, b)), 0.0);
    Rng c = make_rng(42, 1);
    Rng d = make_rng(42);
    EXPECT_GT(test::max_abs(haar_unitary(4, c) - haar_unitary(4, d)), 1e-3);
}

TEST(random, HaarUnitaryIsUnitaryWithUniformModuli) {
    Rng rng = make_rng(8);
    const int d = 3;
    const int n = 4000;
    double mean = 0;
    for (int k = 0; k < n; ++k) {
        Matrix u = haar_unitary(d, rng);
        ASSERT_LT(test::max_abs(u.adjoint() * u - Matrix::Identity(d, d)), 1e-12);
        mean += std::norm(u(0, 0));
    }
    mean /= n;
    // E|U_00|^2 = 1/D with variance (D-1)/(D^2 (D+1)).
    EXPECT_NEAR(mean, 1.0 / d, 5 * std::sqrt(2.0 / (9 * 4) / n));
}
