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

#include <complex>

#include <Eigen/Dense>

namespace dpskit {

using cdouble = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigInputTol = 1e-10;
inline constexpr double kPsdClipTol = 1e-10;

enum class Subsystem { A, B };

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; column k of
/// `vectors` belongs to `values[k]` and has its largest-magnitude component
/// real and positive, which makes the result deterministic up to rotations
/// inside degenerate eigenspaces.
struct Spectrum {
    RealVector values;
    Matrix vectors;
};

/// Largest |M_ij - conj(M_ji)|.
double hermiticity_residual(const Matrix &m);

Spectrum eig_hermitian(const Matrix &m, double tol = kEigInputTol);
RealVector eigenvalues_hermitian(const Matrix &m, double tol = kEigInputTol);

/// Hermitian PSD square root. Eigenvalues in (-clip_tol, 0) are clipped to 0;
/// anything more negative throws NotPSD.
Matrix sqrt_psd(const Matrix &m, double clip_tol = kPsdClipTol);

/// Sum of singular values.
double trace_norm(const Matrix &m);

/// Kronecker product; composite index is i * dim(B) + j.
Matrix tensor(const Matrix &a, const Matrix &b);
Vector tensor(const Vector &a, const Vector &b);

Matrix partial_trace(const Matrix &m, int dA, int dB, Subsystem keep);
Matrix partial_transpose(const Matrix &m, int dA, int dB, Subsystem which);

Matrix projector(const Vector &psi);

/// Unit-trace Hermitian matrix. Positivity is deliberately not part of the
/// invariant: partial transposes and non-CP outputs are carried too.
class DensityMatrix {
   public:
    /// Validates Hermiticity and unit trace at `tol`; stores the Hermitian part.
    static DensityMatrix from_matrix(const Matrix &m, double tol = kHermitianTol);
    static DensityMatrix from_pure(const Vector &psi);
    static DensityMatrix maximally_mixed(int dim);

    int dim() const {
        return static_cast<int>(m_.rows());
    }
    const Matrix &matrix() const {
        return m_;
    }
    bool is_positive(double tol = kPsdClipTol) const;

   private:
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
    }
    Matrix m_;
};

}  // namespace dpskit
