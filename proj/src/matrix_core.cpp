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

#include <cmath>
#include <sstream>

#include "dpskit/error.hpp"

namespace dpskit {

namespace {

void require_square(const Matrix &m, const char *what) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << what << ": matrix is " << m.rows() << "x" << m.cols();
        throw Error(ErrorCode::NonSquare, msg.str());
    }
}

void require_bipartite(const Matrix &m, int dA, int dB, const char *what) {
    require_square(m, what);
    if (dA < 1 || dB < 1 || m.rows() != static_cast<Eigen::Index>(dA) * dB) {
        std::ostringstream msg;
        msg << what << ": dim " << m.rows() << " != " << dA << "*" << dB;
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
}

}  // namespace

double hermiticity_residual(const Matrix &m) {
    if (m.rows() != m.cols()) {
        return INFINITY;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Spectrum eig_hermitian(const Matrix &m, double tol) {
    require_square(m, "eig_hermitian");
    double res = m.size() == 0 ? 0.0 : hermiticity_residual(m);
    if (res > tol) {
        std::ostringstream msg;
        msg << "eig_hermitian: hermiticity residual " << res << " > " << tol;
        throw Error(ErrorCode::NonHermitian, msg.str());
    }
    Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    Spectrum out{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
        Eigen::Index pivot = 0;
        out.vectors.col(k).cwiseAbs().maxCoeff(&pivot);
        cdouble z = out.vectors(pivot, k);
        if (std::abs(z) > 0) {
            out.vectors.col(k) *= std::conj(z) / std::abs(z);
        }
    }
    return out;
}

RealVector eigenvalues_hermitian(const Matrix &m, double tol) {
    require_square(m, "eigenvalues_hermitian");
    double res = m.size() == 0 ? 0.0 : hermiticity_residual(m);
    if (res > tol) {
        std::ostringstream msg;
        msg << "eigenvalues_hermitian: hermiticity residual " << res << " > " << tol;
        throw Error(ErrorCode::NonHermitian, msg.str());
    }
    Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

Matrix sqrt_psd(const Matrix &m, double clip_tol) {
    Spectrum s = eig_hermitian(m);
    RealVector roots(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        double v = s.values[i];
        if (v < -clip_tol) {
            std::ostringstream msg;
            msg << "sqrt_psd: eigenvalue " << v << " < -" << clip_tol;
            throw Error(ErrorCode::NotPSD, msg.str());
        }
        roots[i] = v > 0 ? std::sqrt(v) : 0.0;
    }
    Matrix r = s.vectors * roots.asDiagonal() * s.vectors.adjoint();
    return 0.5 * (r + r.adjoint());
}

double trace_norm(const Matrix &m) {
    require_square(m, "trace_norm");
    if (m.size() == 0) {
        return 0.0;
    }
    if (hermiticity_residual(m) <= kEigInputTol) {
        return eigenvalues_hermitian(m).cwiseAbs().sum();
    }
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

Matrix tensor(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Vector tensor(const Vector &a, const Vector &b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a[i] * b;
    }
    return out;
}

Matrix partial_trace(const Matrix &m, int dA, int dB, Subsystem keep) {
    require_bipartite(m, dA, dB, "partial_trace");
    if (keep == Subsystem::A) {
        Matrix out = Matrix::Zero(dA, dA);
        for (int i = 0; i < dA; ++i) {
            for (int k = 0; k < dA; ++k) {
                out(i, k) = m.block(i * dB, k * dB, dB, dB).trace();
            }
        }
        return out;
    }
    Matrix out = Matrix::Zero(dB, dB);
    for (int i = 0; i < dA; ++i) {
        out += m.block(i * dB, i * dB, dB, dB);
    }
    return out;
}

Matrix partial_transpose(const Matrix &m, int dA, int dB, Subsystem which) {
    require_bipartite(m, dA, dB, "partial_transpose");
    Matrix out(m.rows(), m.cols());
    for (int i = 0; i < dA; ++i) {
        for (int k = 0; k < dA; ++k) {
            auto block = m.block(i * dB, k * dB, dB, dB);
            if (which == Subsystem::B) {
                out.block(i * dB, k * dB, dB, dB) = block.transpose();
            } else {
                out.block(k * dB, i * dB, dB, dB) = block;
            }
        }
    }
    return out;
}

Matrix projector(const Vector &psi) {
    return psi * psi.adjoint();
}

DensityMatrix DensityMatrix::from_matrix(const Matrix &m, double tol) {
    require_square(m, "DensityMatrix");
    if (m.rows() == 0) {
        throw Error(ErrorCode::InvalidDimension, "DensityMatrix: empty matrix");
    }
    double herm = hermiticity_residual(m);
    if (herm > tol) {
        std::ostringstream msg;
        msg << "DensityMatrix: hermiticity residual " << herm << " > " << tol;
        throw Error(ErrorCode::NonHermitian, msg.str());
    }
    double tr_err = std::abs(m.trace() - cdouble(1.0));
    if (tr_err > tol) {
        std::ostringstream msg;
        msg << "DensityMatrix: |Tr - 1| = " << tr_err << " > " << tol;
        throw Error(ErrorCode::NonUnitTrace, msg.str());
    }
    return DensityMatrix(0.5 * (m + m.adjoint()));
}

DensityMatrix DensityMatrix::from_pure(const Vector &psi) {
    double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "DensityMatrix::from_pure: |psi| = " << norm;
        throw Error(ErrorCode::NonUnitVector, msg.str());
    }
    Matrix p = projector(psi);
    return DensityMatrix(0.5 * (p + p.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    if (dim < 1) {
        throw Error(ErrorCode::InvalidDimension, "maximally_mixed: dim < 1");
    }
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

bool DensityMatrix::is_positive(double tol) const {
    return eigenvalues_hermitian(m_).minCoeff() >= -tol;
}

}  // namespace dpskit
