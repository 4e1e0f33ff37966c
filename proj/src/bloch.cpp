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

#include "dpskit/bloch.hpp"

#include <cmath>
#include <sstream>

#include "dpskit/error.hpp"

namespace dpskit {

namespace {

constexpr double kStructureCutoff = 1e-13;

struct SparseEntry {
    int row;
    int col;
    cdouble value;
};

std::vector<SparseEntry> sparse_of(const Matrix &m) {
    std::vector<SparseEntry> out;
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            if (m(r, c) != cdouble(0)) {
                out.push_back({r, c, m(r, c)});
            }
        }
    }
    return out;
}

void require_same_dim(int a, int b, const char *what) {
    if (a != b) {
        std::ostringstream msg;
        msg << what << ": dimension " << a << " vs basis dimension " << b;
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
}

void require_vector(const CoherenceVector &n, const SuBasis &basis, const char *what) {
    require_same_dim(n.dim, basis.dim(), what);
    if (n.n.size() != basis.size()) {
        std::ostringstream msg;
        msg << what << ": coherence vector length " << n.n.size() << " != " << basis.size();
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
}

}  // namespace

SuBasis SuBasis::generate(int dim) {
    if (dim < 2) {
        throw Error(ErrorCode::InvalidDimension, "generate_basis: D < 2");
    }
    SuBasis basis;
    basis.dim_ = dim;
    const cdouble I(0.0, 1.0);
    for (int j = 0; j < dim; ++j) {
        for (int k = j + 1; k < dim; ++k) {
            Matrix m = Matrix::Zero(dim, dim);
            m(j, k) = 1.0;
            m(k, j) = 1.0;
            basis.generators_.push_back(std::move(m));
        }
    }
    for (int j = 0; j < dim; ++j) {
        for (int k = j + 1; k < dim; ++k) {
            Matrix m = Matrix::Zero(dim, dim);
            m(j, k) = -I;
            m(k, j) = I;
            basis.generators_.push_back(std::move(m));
        }
    }
    for (int l = 1; l < dim; ++l) {
        Matrix m = Matrix::Zero(dim, dim);
        double s = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int j = 0; j < l; ++j) {
            m(j, j) = s;
        }
        m(l, l) = -l * s;
        basis.generators_.push_back(std::move(m));
    }

    // With T_ijk = Tr(l_i l_j l_k) and Hermitian generators, T_jik = conj(T_ijk),
    // so c_ijk = Im(T_ijk) / 2 and d_ijk = Re(T_ijk) / 2.
    const int g = basis.size();
    std::vector<std::vector<SparseEntry>> sparse;
    sparse.reserve(g);
    for (const auto &m : basis.generators_) {
        sparse.push_back(sparse_of(m));
    }
    Matrix prod(dim, dim);
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            prod.setZero();
            for (const auto &a : sparse[i]) {
                for (const auto &b : sparse[j]) {
                    if (a.col == b.row) {
                        prod(a.row, b.col) += a.value * b.value;
                    }
                }
            }
            for (int k = 0; k < g; ++k) {
                cdouble tr = 0;
                for (const auto &e : sparse[k]) {
                    tr += prod(e.col, e.row) * e.value;
                }
                if (std::abs(tr.imag()) > 2 * kStructureCutoff) {
                    basis.c_.push_back({i, j, k, tr.imag() / 2.0});
                }
                if (std::abs(tr.real()) > 2 * kStructureCutoff) {
                    basis.d_.push_back({i, j, k, tr.real() / 2.0});
                }
            }
        }
    }
    return basis;
}

double SuBasis::c(int i, int j, int k) const {
    for (const auto &e : c_) {
        if (e.i == i && e.j == j && e.k == k) {
            return e.value;
        }
    }
    return 0.0;
}

double SuBasis::d(int i, int j, int k) const {
    for (const auto &e : d_) {
        if (e.i == i && e.j == j && e.k == k) {
            return e.value;
        }
    }
    return 0.0;
}

double SuBasis::scale() const {
    return std::sqrt(dim_ * (dim_ - 1) / 2.0);
}

SuBasis generate_basis(int dim) {
    return SuBasis::generate(dim);
}

double CoherenceVector::dot(const CoherenceVector &other) const {
    if (n.size() != other.n.size()) {
        throw Error(ErrorCode::DimensionMismatch, "CoherenceVector::dot: length mismatch");
    }
    return n.dot(other.n);
}

CoherenceVector to_coherence(const DensityMatrix &rho, const SuBasis &basis) {
    require_same_dim(rho.dim(), basis.dim(), "to_coherence");
    const int dim = basis.dim();
    const double k = std::sqrt(dim / (2.0 * (dim - 1)));
    CoherenceVector out{dim, RealVector(basis.size())};
    for (int i = 0; i < basis.size(); ++i) {
        out.n[i] = k * (rho.matrix() * basis.generator(i)).trace().real();
    }
    return out;
}

DensityMatrix from_coherence(const CoherenceVector &n, const SuBasis &basis) {
    require_vector(n, basis, "from_coherence");
    const int dim = basis.dim();
    Matrix m = Matrix::Identity(dim, dim);
    const double s = basis.scale();
    for (int i = 0; i < basis.size(); ++i) {
        if (n.n[i] != 0.0) {
            m += s * n.n[i] * basis.generator(i);
        }
    }
    m /= static_cast<double>(dim);
    return DensityMatrix::from_matrix(m, 1e-10);
}

CoherenceVector star(const CoherenceVector &a, const CoherenceVector &b, const SuBasis &basis) {
    require_vector(a, basis, "star");
    require_vector(b, basis, "star");
    const int dim = basis.dim();
    if (dim == 2) {
        throw Error(ErrorCode::UndefinedForDim2, "star product has a 1/(D-2) factor");
    }
    CoherenceVector out{dim, RealVector::Zero(basis.size())};
    for (const auto &e : basis.d_entries()) {
        out.n[e.k] += e.value * a.n[e.i] * b.n[e.j];
    }
    out.n *= basis.scale() / (dim - 2.0);
    return out;
}

std::vector<double> invariant_ladder(const CoherenceVector &n, const SuBasis &basis, int r_max) {
    require_vector(n, basis, "invariant_ladder");
    if (basis.dim() == 2) {
        throw Error(ErrorCode::UndefinedForDim2, "invariant ladder needs the star product");
    }
    if (r_max < 0) {
        throw Error(ErrorCode::InvalidArgument, "invariant_ladder: r_max < 0");
    }
    std::vector<double> out;
    CoherenceVector term = n;
    for (int r = 0; r <= r_max; ++r) {
        out.push_back(term.dot(n));
        if (r < r_max) {
            term = star(n, term, basis);
        }
    }
    return out;
}

RealVector dps_spectrum(int dim, double p) {
    RealVector out = RealVector::Constant(dim, (1.0 - p) / dim);
    if (p >= 0) {
        out[dim - 1] += p;
    } else {
        out[0] += p;
    }
    return out;
}

DpsVerdict dps_verdict(const DensityMatrix &rho, const SuBasis &basis, const DpsTestOptions &opts) {
    require_same_dim(rho.dim(), basis.dim(), "dps_test");
    const int dim = basis.dim();
    DpsVerdict v;
    CoherenceVector n = to_coherence(rho, basis);
    v.coherence_norm = n.norm();
    RealVector eig = eigenvalues_hermitian(rho.matrix());
    v.min_eigenvalue = eig.minCoeff();

    double p = v.coherence_norm;
    if (dim > 2 && v.coherence_norm > 0) {
        CoherenceVector nn = star(n, n, basis);
        if (nn.dot(n) < 0) {
            p = -p;
        }
        v.star_residual = (nn.n - p * n.n).norm();
        if (v.star_residual > opts.star_tol) {
            std::ostringstream msg;
            msg << "star condition |n*n - p n| = " << v.star_residual << " > " << opts.star_tol;
            v.reason = msg.str();
            return v;
        }
    }
    v.spectrum_residual = (eig - dps_spectrum(dim, p)).cwiseAbs().maxCoeff();
    if (v.spectrum_residual > opts.spectrum_tol) {
        std::ostringstream msg;
        msg << "spectrum deviates from the pattern a,b,...,b by " << v.spectrum_residual;
        v.reason = msg.str();
        return v;
    }
    if (v.min_eigenvalue < -opts.spectrum_tol || p < -1.0 / (dim - 1) - opts.spectrum_tol ||
        p > 1.0 + opts.spectrum_tol) {
        std::ostringstream msg;
        msg << "not positive: min eigenvalue " << v.min_eigenvalue << ", p = " << p;
        v.reason = msg.str();
        return v;
    }
    v.p = p;
    v.reason = "DPS";
    return v;
}

std::optional<double> dps_test(const DensityMatrix &rho, const SuBasis &basis, const DpsTestOptions &opts) {
    return dps_verdict(rho, basis, opts).p;
}

}  // namespace dpskit
