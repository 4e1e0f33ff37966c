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

#include "dpskit/bipartite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dpskit/error.hpp"

namespace dpskit {

namespace {

void require_dims(int dA, int dB, const char *what) {
    if (dA < 1 || dB < 1) {
        std::ostringstream msg;
        msg << what << ": subsystem dims " << dA << ", " << dB;
        throw Error(ErrorCode::InvalidDimension, msg.str());
    }
    if (dA > dB) {
        std::ostringstream msg;
        msg << what << ": dA = " << dA << " > dB = " << dB;
        throw Error(ErrorCode::RequiresDALeDB, msg.str());
    }
}

/// Validates a Schmidt vector and pads it with zeros to `len`.
std::vector<double> checked_schmidt(std::span<const double> b, std::size_t len, const char *what) {
    if (b.size() > len) {
        std::ostringstream msg;
        msg << what << ": " << b.size() << " coefficients for a dimension-" << len << " factor";
        throw Error(ErrorCode::InvalidSchmidtVector, msg.str());
    }
    double norm2 = 0;
    for (double x : b) {
        if (!(x >= -1e-12)) {
            std::ostringstream msg;
            msg << what << ": negative coefficient " << x;
            throw Error(ErrorCode::InvalidSchmidtVector, msg.str());
        }
        norm2 += x * x;
    }
    if (std::abs(norm2 - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << what << ": sum b^2 = " << norm2;
        throw Error(ErrorCode::InvalidSchmidtVector, msg.str());
    }
    std::vector<double> out(b.begin(), b.end());
    out.resize(len, 0.0);
    for (double &x : out) {
        x = std::max(x, 0.0);
    }
    return out;
}

RealVector sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return Eigen::Map<RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Size of the largest cluster of (sorted) values whose neighbours differ by
/// at most tol.
int largest_cluster(const RealVector &ascending, double tol) {
    int best = ascending.size() > 0 ? 1 : 0;
    int run = 1;
    for (Eigen::Index i = 1; i < ascending.size(); ++i) {
        run = (ascending[i] - ascending[i - 1] <= tol) ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

EntanglementReport report_from_spectrum(RealVector spectrum, int dA, double neg_tol) {
    EntanglementReport r;
    r.bound = dA * (dA - 1) / 2;
    double negative_mass = 0;
    for (double v : spectrum) {
        if (v < -neg_tol) {
            ++r.negative_count;
            negative_mass += -v;
        }
    }
    r.negativity = 2.0 * negative_mass / (dA - 1);
    r.entangled = r.negative_count > 0;
    r.pt_spectrum = std::move(spectrum);
    r.caveat = r.entangled ? "negative partial transpose: entangled"
                           : "PPT: entanglement not detected (PPT is sufficient, not necessary)";
    return r;
}

}  // namespace

Vector SchmidtForm::canonical_state() const {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(dA) * dB);
    for (int j = 0; j < dA; ++j) {
        out[j * dB + j] = b[j];
    }
    return out;
}

Vector SchmidtForm::reconstruct() const {
    return tensor(U, V).adjoint() * canonical_state();
}

SchmidtForm schmidt_pure(const Vector &psi, int dA, int dB) {
    require_dims(dA, dB, "schmidt_pure");
    if (psi.size() != static_cast<Eigen::Index>(dA) * dB) {
        std::ostringstream msg;
        msg << "schmidt_pure: length " << psi.size() << " != " << dA << "*" << dB;
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
        throw Error(ErrorCode::NonUnitVector, "schmidt_pure: state is not normalised");
    }
    Matrix coeff(dA, dB);
    for (int i = 0; i < dA; ++i) {
        for (int mu = 0; mu < dB; ++mu) {
            coeff(i, mu) = psi[i * dB + mu];
        }
    }
    // coeff = W S Z^dagger  =>  W^dagger coeff Z = S, i.e. U = W^dagger, V = Z^T.
    Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SchmidtForm out;
    out.dA = dA;
    out.dB = dB;
    out.b = svd.singularValues();
    out.U = svd.matrixU().adjoint();
    out.V = svd.matrixV().transpose();
    return out;
}

DpsSchmidt schmidt_dps(const DensityMatrix &rho, int dA, int dB, const SuBasis &basis, const DpsTestOptions &opts) {
    require_dims(dA, dB, "schmidt_dps");
    if (rho.dim() != dA * dB) {
        std::ostringstream msg;
        msg << "schmidt_dps: dim " << rho.dim() << " != " << dA << "*" << dB;
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
    DpsVerdict verdict = dps_verdict(rho, basis, opts);
    if (!verdict.p) {
        throw Error(ErrorCode::NotDPS, "schmidt_dps: " + verdict.reason);
    }
    const double p = *verdict.p;
    if (std::abs(p) < opts.spectrum_tol) {
        throw Error(ErrorCode::AmbiguousAtPZero, "schmidt_dps: p = 0, every purification is consistent");
    }
    // The non-degenerate eigenvalue is the largest for p > 0 and the smallest
    // for p < 0.
    Spectrum s = eig_hermitian(rho.matrix());
    Eigen::Index col = p > 0 ? s.values.size() - 1 : 0;
    DpsSchmidt out;
    out.p = p;
    out.purification = s.vectors.col(col);
    out.purification /= out.purification.norm();
    out.form = schmidt_pure(out.purification, dA, dB);
    return out;
}

DensityMatrix dps_from_schmidt(double p, const SchmidtForm &form) {
    Vector psi = form.reconstruct();
    return DpsState::make(psi / psi.norm(), p).density();
}

RealVector reduced_spectrum_dps(double p, std::span<const double> b, int dX, int n_nonzero) {
    if (dX < 1) {
        throw Error(ErrorCode::InvalidDimension, "reduced_spectrum_dps: dX < 1");
    }
    if (n_nonzero < 0 || n_nonzero > dX || static_cast<std::size_t>(n_nonzero) > b.size()) {
        std::ostringstream msg;
        msg << "reduced_spectrum_dps: n_nonzero = " << n_nonzero << " with dX = " << dX << " and " << b.size()
            << " coefficients";
        throw Error(ErrorCode::InvalidSchmidtVector, msg.str());
    }
    std::vector<double> coeff = checked_schmidt(b.first(n_nonzero), dX, "reduced_spectrum_dps");
    std::vector<double> out;
    const double base = (1.0 - p) / dX;
    for (int i = 0; i < dX; ++i) {
        out.push_back(i < n_nonzero ? base + p * coeff[i] * coeff[i] : base);
    }
    return sorted(std::move(out));
}

ConsistencyReport consistency_check(const DensityMatrix &rhoA, const DensityMatrix &rhoB, double tol) {
    const int dA = rhoA.dim();
    const int dB = rhoB.dim();
    require_dims(dA, dB, "consistency_check");
    ConsistencyReport r;
    RealVector eigA = eigenvalues_hermitian(rhoA.matrix());
    RealVector eigB = eigenvalues_hermitian(rhoB.matrix());

    if (eigA.minCoeff() < tol || eigB.minCoeff() < tol) {
        r.reason = "a marginal is rank-deficient";
        return r;
    }
    if (dB >= dA + 2 && largest_cluster(eigB, tol) < dB - dA) {
        std::ostringstream msg;
        msg << "rho_B has no degenerate eigenspace of dimension " << dB - dA;
        r.reason = msg.str();
        return r;
    }
    if (dA == dB) {
        if ((eigA - eigB).cwiseAbs().maxCoeff() > tol) {
            r.reason = "marginal spectra differ";
            return r;
        }
        r.verdict = ConsistencyVerdict::Consistent;
        r.reason = "equal marginal spectra; p is not identifiable from marginals when dA = dB";
        return r;
    }

    // For dA < dB the value (1-p)/dB is an eigenvalue of rho_B; try each.
    const int D = dA * dB;
    for (Eigen::Index idx = 0; idx < eigB.size(); ++idx) {
        const double p = 1.0 - dB * eigB[idx];
        if (p < -1.0 / (D - 1) - tol || p > 1.0 + tol) {
            continue;
        }
        std::vector<double> b2(dA);
        bool ok = true;
        if (std::abs(p) < tol) {
            ok = (eigA.array() - 1.0 / dA).abs().maxCoeff() <= tol;
            std::fill(b2.begin(), b2.end(), 1.0 / dA);
        } else {
            for (int i = 0; i < dA; ++i) {
                b2[i] = (eigA[i] - (1.0 - p) / dA) / p;
                if (b2[i] < -tol) {
                    ok = false;
                }
                b2[i] = std::max(b2[i], 0.0);
            }
        }
        if (!ok) {
            continue;
        }
        double total = 0;
        for (double x : b2) {
            total += x;
        }
        std::vector<double> b(dA);
        for (int i = 0; i < dA; ++i) {
            b[i] = std::sqrt(b2[i] / total);
        }
        std::sort(b.begin(), b.end(), std::greater<>());
        RealVector predicted = reduced_spectrum_dps(p, b, dB, dA);
        if ((predicted - eigB).cwiseAbs().maxCoeff() > tol) {
            continue;
        }
        r.verdict = ConsistencyVerdict::Consistent;
        r.reason = "marginal spectra explained by a common (p, b); DPS form not proven";
        r.p = p;
        r.b = std::move(b);
        return r;
    }
    r.reason = "no (p, b) explains both marginal spectra";
    return r;
}

RealVector pt_spectrum_closed(double p, std::span<const double> b, int dA, int dB) {
    require_dims(dA, dB, "pt_spectrum_closed");
    std::vector<double> coeff = checked_schmidt(b, dA, "pt_spectrum_closed");
    const int D = dA * dB;
    const double base = (1.0 - p) / D;
    std::vector<double> out;
    out.reserve(D);
    for (int j = 0; j < dA; ++j) {
        out.push_back(base + p * coeff[j] * coeff[j]);
    }
    for (int j = 0; j < dA; ++j) {
        for (int k = j + 1; k < dA; ++k) {
            out.push_back(base + p * coeff[j] * coeff[k]);
            out.push_back(base - p * coeff[j] * coeff[k]);
        }
    }
    out.resize(D, base);
    return sorted(std::move(out));
}

EntanglementReport negativity(double p, std::span<const double> b, int dA, int dB, double neg_tol) {
    if (dA < 2) {
        throw Error(ErrorCode::InvalidDimension, "negativity: dA < 2");
    }
    RealVector spectrum = pt_spectrum_closed(p, b, dA, dB);
    EntanglementReport r = report_from_spectrum(std::move(spectrum), dA, neg_tol);
    std::vector<double> coeff = checked_schmidt(b, dA, "negativity");
    double max_pair = 0;
    for (int j = 0; j < dA; ++j) {
        for (int k = j + 1; k < dA; ++k) {
            max_pair = std::max(max_pair, coeff[j] * coeff[k]);
        }
    }
    const double D = static_cast<double>(dA) * dB;
    r.pair_threshold = 1.0 / (D * max_pair + 1.0);
    r.universal_threshold = 1.0 / (D / 2.0 + 1.0);
    return r;
}

EntanglementReport entanglement_of(const DensityMatrix &rho, int dA, int dB, double neg_tol) {
    require_dims(dA, dB, "entanglement_of");
    if (dA < 2) {
        throw Error(ErrorCode::InvalidDimension, "entanglement_of: dA < 2");
    }
    Matrix pt = partial_transpose(rho.matrix(), dA, dB, Subsystem::B);
    EntanglementReport r = report_from_spectrum(eigenvalues_hermitian(pt), dA, neg_tol);
    const double D = static_cast<double>(dA) * dB;
    r.pair_threshold = NAN;
    r.universal_threshold = 1.0 / (D / 2.0 + 1.0);
    return r;
}

TwoQubitCanonical two_qubit_canonical(double p, double omega) {
    if (!(p >= -1.0 / 3.0 - 1e-12 && p <= 1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "two_qubit_canonical: p = " << p << " outside [-1/3, 1]";
        throw Error(ErrorCode::PolarizationOutOfRange, msg.str());
    }
    if (!(omega >= 0.0 && omega <= std::numbers::pi / 2 + 1e-12)) {
        throw Error(ErrorCode::InvalidArgument, "two_qubit_canonical: Omega outside [0, pi/2]");
    }
    const cdouble I(0.0, 1.0);
    Matrix id = Matrix::Identity(2, 2);
    Matrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, -I, I, 0;
    sz << 1, 0, 0, -1;
    const double c = std::cos(omega);
    const double s = std::sin(omega);
    Matrix m = tensor(id, id) + p * c * tensor(sz, id) + p * c * tensor(id, sz) + p * s * tensor(sx, sx) -
               p * s * tensor(sy, sy) + p * tensor(sz, sz);
    m /= 4.0;
    return TwoQubitCanonical{DensityMatrix::from_matrix(m, 1e-10),
                             {(1 + p) / 4 + p * c / 2, (1 + p) / 4 - p * c / 2, (1 - p) / 4 + p * s / 2,
                              (1 - p) / 4 - p * s / 2}};
}

bool two_qubit_entangled_condition(double p, double omega) {
    return p > 1.0 / 3.0 && std::sin(omega) > (1 - p) / (2 * p);
}

Vector max_entangled(int d) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(d) * d);
    for (int j = 0; j < d; ++j) {
        v[j * d + j] = 1.0 / std::sqrt(static_cast<double>(d));
    }
    return v;
}

IsotropicState isotropic(int dA, double F) {
    if (dA < 2) {
        throw Error(ErrorCode::InvalidDimension, "isotropic: dA < 2");
    }
    if (!(F >= 0.0 && F <= 1.0)) {
        std::ostringstream msg;
        msg << "isotropic: F = " << F << " outside [0, 1]";
        throw Error(ErrorCode::FOutOfRange, msg.str());
    }
    const double d2 = static_cast<double>(dA) * dA;
    const double p = (d2 * F - 1.0) / (d2 - 1.0);
    return IsotropicState{DpsState::make(max_entangled(dA), p), p, F <= 1.0 / dA};
}

}  // namespace dpskit
