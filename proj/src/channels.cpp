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

#include "dpskit/channels.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <sstream>

#include "dpskit/error.hpp"
#include "dpskit/random.hpp"

namespace dpskit {

namespace {

Matrix mpow(const Matrix &m, int k) {
    Matrix out = Matrix::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) {
        out = out * m;
    }
    return out;
}

int mod(int a, int d) {
    return ((a % d) + d) % d;
}

Matrix basis_projector(int dim, int j) {
    Matrix p = Matrix::Zero(dim, dim);
    p(j, j) = 1.0;
    return p;
}

void require_cp_range(int dim, double p, const char *what) {
    const double lo = -1.0 / (static_cast<double>(dim) * dim - 1.0);
    if (!(p >= lo - 1e-12 && p <= 1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << what << ": p = " << p << " outside the CP range [" << lo << ", 1] for D = " << dim;
        throw Error(ErrorCode::PolarizationOutOfRange, msg.str());
    }
}

/// Choi vector of K: entry i*D + j is K_ij / sqrt(D).
Vector choi_vector(const Matrix &k) {
    const int d = static_cast<int>(k.rows());
    Vector v(d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            v[i * d + j] = k(i, j);
        }
    }
    return v / std::sqrt(static_cast<double>(d));
}

/// Minimal Kraus set of the channel whose Choi matrix is J.
std::vector<Matrix> kraus_from_choi(const Matrix &j, int dim) {
    Spectrum s = eig_hermitian(0.5 * (j + j.adjoint()));
    std::vector<Matrix> out;
    for (Eigen::Index c = s.values.size() - 1; c >= 0; --c) {
        if (s.values[c] <= 1e-14) {
            continue;
        }
        Matrix k(dim, dim);
        const double scale = std::sqrt(dim * s.values[c]);
        for (int r = 0; r < dim; ++r) {
            for (int q = 0; q < dim; ++q) {
                k(r, q) = scale * s.vectors(r * dim + q, c);
            }
        }
        out.push_back(std::move(k));
    }
    return out;
}

/// Choi matrix (unnormalised sum) of rho -> u^dagger E(u rho u^dagger) u.
void accumulate_conjugated(Matrix &choi, const KrausChannel &ch, const Matrix &u, double weight) {
    for (const auto &k : ch.kraus()) {
        Vector v = choi_vector(u.adjoint() * k * u);
        choi += weight * v * v.adjoint();
    }
}

double depolarizing_residual(const KrausChannel &ch, double p) {
    const int d = ch.dim();
    double worst = 0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Matrix e = Matrix::Zero(d, d);
            e(i, j) = 1.0;
            Matrix expected = p * e;
            if (i == j) {
                expected += (1.0 - p) / d * Matrix::Identity(d, d);
            }
            worst = std::max(worst, (ch.apply(e) - expected).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

/// Projective key: scale by the conjugate phase of the first sizeable entry
/// and round.
std::vector<long long> projective_key(const Matrix &u) {
    cdouble phase = 1.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        cdouble x = u(i % u.rows(), i / u.rows());
        if (std::abs(x) > 1e-6) {
            phase = std::conj(x) / std::abs(x);
            break;
        }
    }
    std::vector<long long> key;
    key.reserve(2 * u.size());
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            cdouble x = u(r, c) * phase;
            key.push_back(std::llround(x.real() * 1e7));
            key.push_back(std::llround(x.imag() * 1e7));
        }
    }
    return key;
}

}  // namespace

KrausChannel KrausChannel::make(std::vector<Matrix> kraus, double tol) {
    if (kraus.empty()) {
        throw Error(ErrorCode::InvalidArgument, "KrausChannel: no Kraus operators");
    }
    const Eigen::Index d = kraus.front().rows();
    for (const auto &k : kraus) {
        if (k.rows() != k.cols()) {
            throw Error(ErrorCode::NonSquare, "KrausChannel: Kraus operator is not square");
        }
        if (k.rows() != d) {
            throw Error(ErrorCode::DimensionMismatch, "KrausChannel: Kraus operators of different sizes");
        }
    }
    KrausChannel ch(static_cast<int>(d), std::move(kraus));
    double r = ch.tp_residual();
    if (r > tol) {
        std::ostringstream msg;
        msg << "|sum K^dagger K - 1|_max = " << r << " > " << tol;
        throw Error(ErrorCode::NotTracePreserving, msg.str());
    }
    return ch;
}

KrausChannel KrausChannel::identity(int dim) {
    return make({Matrix::Identity(dim, dim)});
}

KrausChannel KrausChannel::unitary(const Matrix &u) {
    return make({u});
}

double KrausChannel::tp_residual() const {
    Matrix s = Matrix::Zero(dim_, dim_);
    for (const auto &k : kraus_) {
        s += k.adjoint() * k;
    }
    return (s - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
}

Matrix KrausChannel::apply(const Matrix &m) const {
    if (m.rows() != dim_ || m.cols() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "KrausChannel::apply: operator size");
    }
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const auto &k : kraus_) {
        out += k * m * k.adjoint();
    }
    return out;
}

DensityMatrix KrausChannel::apply(const DensityMatrix &rho) const {
    return DensityMatrix::from_matrix(apply(rho.matrix()), 1e-10);
}

WeylBasis WeylBasis::make(int dim) {
    if (dim < 2) {
        throw Error(ErrorCode::InvalidDimension, "WeylBasis: D < 2");
    }
    WeylBasis w;
    w.dim = dim;
    w.X = Matrix::Zero(dim, dim);
    w.Z = Matrix::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        w.X((j + 1) % dim, j) = 1.0;
        w.Z(j, j) = std::polar(1.0, 2 * std::numbers::pi * j / dim);
    }
    return w;
}

Matrix WeylBasis::weyl(int a, int b) const {
    return mpow(X, mod(a, dim)) * mpow(Z, mod(b, dim));
}

ChiState ChiState::make(int dim, cdouble alpha, cdouble beta) {
    if (dim < 2) {
        throw Error(ErrorCode::InvalidDimension, "ChiState: D < 2");
    }
    const double norm = std::norm(alpha) + std::norm(beta) + 2 * (alpha * std::conj(beta)).real() / dim;
    if (std::abs(norm - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "ChiState: norm^2 = " << norm;
        throw Error(ErrorCode::NonUnitVector, msg.str());
    }
    const double d2 = static_cast<double>(dim) * dim;
    if (std::norm(beta) > d2 / (d2 - 1) + 1e-12) {
        std::ostringstream msg;
        msg << "ChiState: |beta|^2 = " << std::norm(beta) << " > D^2/(D^2-1)";
        throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    return ChiState{dim, alpha, beta};
}

ChiState ChiState::from_beta2(int dim, double beta2) {
    const double d2 = static_cast<double>(dim) * dim;
    if (!(beta2 >= 0 && beta2 <= d2 / (d2 - 1) + 1e-12)) {
        std::ostringstream msg;
        msg << "ChiState: |beta|^2 = " << beta2 << " outside [0, D^2/(D^2-1)]";
        throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    const double beta = std::sqrt(beta2);
    const double disc = std::max(0.0, beta2 / d2 - beta2 + 1.0);
    const double alpha = -beta / dim + std::sqrt(disc);
    return make(dim, alpha, beta);
}

Vector ChiState::vector() const {
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    Vector phi = Vector::Zero(dim * dim);
    for (int j = 0; j < dim; ++j) {
        phi[j * dim + j] += alpha * norm;
        phi[j] += beta * norm;  // a1 = 0, a2 = j
    }
    return phi;
}

DepolarizedState apply_depolarizing(const DensityMatrix &rho, double p) {
    const int d = rho.dim();
    if (!(p >= -1.0 / (d - 1.0) - 1e-12 && p <= 1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "apply_depolarizing: p = " << p << " outside [" << -1.0 / (d - 1.0) << ", 1]";
        throw Error(ErrorCode::PolarizationOutOfRange, msg.str());
    }
    Matrix m = (1.0 - p) / d * Matrix::Identity(d, d) + p * rho.matrix();
    const double lo = -1.0 / (static_cast<double>(d) * d - 1.0);
    return DepolarizedState{DensityMatrix::from_matrix(m, 1e-10), p >= lo - 1e-12 && p <= 1.0 + 1e-12};
}

KrausChannel depolarizing_channel(int dim, double p) {
    if (dim < 2) {
        throw Error(ErrorCode::InvalidDimension, "depolarizing_channel: D < 2");
    }
    require_cp_range(dim, p, "depolarizing_channel");
    WeylBasis w = WeylBasis::make(dim);
    const double d2 = static_cast<double>(dim) * dim;
    const double rest = std::max(0.0, (1.0 - p) / d2);
    std::vector<Matrix> kraus;
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            double weight = rest + (a == 0 && b == 0 ? p : 0.0);
            weight = std::max(0.0, weight);
            if (weight > 0) {
                kraus.push_back(std::sqrt(weight) * w.weyl(a, b));
            }
        }
    }
    return KrausChannel::make(std::move(kraus));
}

KrausChannel shift_channel(int dim, double f) {
    if (!(f >= 0.0 && f <= 1.0)) {
        std::ostringstream msg;
        msg << "shift_channel: f = " << f << " outside [0, 1]";
        throw Error(ErrorCode::FOutOfRange, msg.str());
    }
    WeylBasis w = WeylBasis::make(dim);
    std::vector<Matrix> kraus;
    if (f > 0) {
        kraus.push_back(std::sqrt(f) * Matrix::Identity(dim, dim));
    }
    if (f < 1) {
        kraus.push_back(std::sqrt(1.0 - f) * w.X);
    }
    return KrausChannel::make(std::move(kraus));
}

Matrix protocol1_unitary(int dim) {
    if (dim < 2 || dim > 5) {
        std::ostringstream msg;
        msg << "protocol1: D = " << dim << " outside [2, 5]";
        throw Error(ErrorCode::UnsupportedDimension, msg.str());
    }
    WeylBasis w = WeylBasis::make(dim);
    Matrix id = Matrix::Identity(dim, dim);
    const int n = dim * dim * dim;
    // Tensor order S, a1, a2. The rightmost factor acts first.
    Matrix f1 = Matrix::Zero(n, n);  // a2-controlled X^j on S
    Matrix f2 = Matrix::Zero(n, n);  // a1-controlled X^-j on S
    Matrix f3 = Matrix::Zero(n, n);  // S-controlled X^j on a1
    Matrix f4 = Matrix::Zero(n, n);  // S-controlled X^j on a2
    for (int j = 0; j < dim; ++j) {
        Matrix pj = basis_projector(dim, j);
        Matrix xj = mpow(w.X, j);
        Matrix xmj = mpow(w.X, mod(-j, dim));
        f1 += tensor(tensor(xj, id), pj);
        f2 += tensor(tensor(xmj, pj), id);
        f3 += tensor(tensor(pj, xj), id);
        f4 += tensor(tensor(pj, id), xj);
    }
    return f1 * f2 * f3 * f4;
}

DensityMatrix protocol1(const Vector &psi, const ChiState &chi) {
    const int d = chi.dim;
    if (psi.size() != d) {
        std::ostringstream msg;
        msg << "protocol1: |psi| has length " << psi.size() << ", chi has D = " << d;
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
        throw Error(ErrorCode::NonUnitVector, "protocol1: psi is not normalised");
    }
    Vector out = protocol1_unitary(d) * tensor(psi, chi.vector());
    Matrix full = projector(out);
    return DensityMatrix::from_matrix(partial_trace(full, d, d * d, Subsystem::A), 1e-10);
}

DensityMatrix protocol1_formula(const Vector &psi, const ChiState &chi) {
    const int d = chi.dim;
    if (psi.size() != d) {
        throw Error(ErrorCode::DimensionMismatch, "protocol1_formula: dimension mismatch");
    }
    const double b2 = std::norm(chi.beta);
    Matrix m = (1.0 - b2) * projector(psi) + b2 / d * Matrix::Identity(d, d);
    return DensityMatrix::from_matrix(m, 1e-10);
}

DensityMatrix jamiolkowski_state(const KrausChannel &ch) {
    const int d = ch.dim();
    if (ch.tp_residual() > kTracePreservingTol) {
        throw Error(ErrorCode::NotTracePreserving, "jamiolkowski_state");
    }
    Matrix j = Matrix::Zero(d * d, d * d);
    for (const auto &k : ch.kraus()) {
        Vector v = choi_vector(k);
        j += v * v.adjoint();
    }
    return DensityMatrix::from_matrix(j, 1e-10);
}

double jamiolkowski_fidelity(const KrausChannel &ch) {
    const int d = ch.dim();
    if (ch.tp_residual() > kTracePreservingTol) {
        throw Error(ErrorCode::NotTracePreserving, "jamiolkowski_fidelity");
    }
    double f = 0;
    for (const auto &k : ch.kraus()) {
        f += std::norm(k.trace());
    }
    return std::clamp(f / (static_cast<double>(d) * d), 0.0, 1.0);
}

Matrix weyl_cosine_unitary(int dim, double alpha) {
    WeylBasis w = WeylBasis::make(dim);
    Spectrum s = eig_hermitian(w.X + w.X.adjoint());
    Vector phases(dim);
    for (int i = 0; i < dim; ++i) {
        phases[i] = std::polar(1.0, alpha * s.values[i]);
    }
    return s.vectors * phases.asDiagonal() * s.vectors.adjoint();
}

double weyl_cosine_fidelity(int dim, double alpha) {
    cdouble sum = 0;
    for (int j = 0; j < dim; ++j) {
        sum += std::polar(1.0, 2 * alpha * std::cos(2 * std::numbers::pi * j / dim));
    }
    return std::norm(sum) / (static_cast<double>(dim) * dim);
}

double p_from_fidelity(int dim, double f) {
    const double d2 = static_cast<double>(dim) * dim;
    return (d2 * f - 1.0) / (d2 - 1.0);
}

std::vector<Matrix> clifford_group(int dim) {
    if (dim != 2 && dim != 3) {
        std::ostringstream msg;
        msg << "clifford_group: D = " << dim << " (only 2 and 3 are enumerated)";
        throw Error(ErrorCode::UnsupportedDimension, msg.str());
    }
    WeylBasis w = WeylBasis::make(dim);
    Matrix fourier(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
            fourier(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(dim)), 2 * std::numbers::pi * j * k / dim);
        }
    }
    Matrix phase = Matrix::Identity(dim, dim);
    if (dim == 2) {
        phase(1, 1) = cdouble(0, 1);
    } else {
        phase(2, 2) = std::polar(1.0, 2 * std::numbers::pi / 3);
    }
    const std::vector<Matrix> gens = {fourier, phase, w.X, w.Z};

    std::vector<Matrix> group;
    std::map<std::vector<long long>, std::size_t> seen;
    std::deque<std::size_t> frontier;
    Matrix id = Matrix::Identity(dim, dim);
    seen.emplace(projective_key(id), 0);
    group.push_back(id);
    frontier.push_back(0);
    while (!frontier.empty()) {
        std::size_t at = frontier.front();
        frontier.pop_front();
        for (const auto &g : gens) {
            Matrix next = g * group[at];
            auto key = projective_key(next);
            if (seen.emplace(key, group.size()).second) {
                group.push_back(next);
                frontier.push_back(group.size() - 1);
            }
        }
    }
    return group;
}

bool normalizes_weyl_group(const Matrix &u, double tol) {
    const int d = static_cast<int>(u.rows());
    WeylBasis w = WeylBasis::make(d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            Matrix c = u * w.weyl(a, b) * u.adjoint();
            bool found = false;
            for (int a2 = 0; a2 < d && !found; ++a2) {
                for (int b2 = 0; b2 < d && !found; ++b2) {
                    // |Tr(P^dagger C)| = D exactly when C is a phase times P.
                    found = std::abs(std::abs((w.weyl(a2, b2).adjoint() * c).trace()) - d) < tol;
                }
            }
            if (!found) {
                return false;
            }
        }
    }
    return true;
}

TwirlResult twirl(const KrausChannel &ch, TwirlMode mode, int samples, std::uint64_t seed) {
    const int d = ch.dim();
    if (ch.tp_residual() > kTracePreservingTol) {
        throw Error(ErrorCode::NotTracePreserving, "twirl");
    }
    Matrix choi = Matrix::Zero(d * d, d * d);
    TwirlResult r{KrausChannel::identity(d)};
    if (mode == TwirlMode::HaarSample) {
        if (d > 6) {
            throw Error(ErrorCode::UnsupportedDimension, "twirl: Haar sampling supports D <= 6");
        }
        if (samples < 2) {
            throw Error(ErrorCode::InvalidArgument, "twirl: Haar sampling needs at least 2 samples");
        }
        Rng rng = make_rng(seed);
        double sum = 0;
        double sum2 = 0;
        for (int s = 0; s < samples; ++s) {
            Matrix u = haar_unitary(d, rng);
            accumulate_conjugated(choi, ch, u, 1.0 / samples);
            double x = 0;
            for (int j = 0; j < d; ++j) {
                Vector in = u.col(j);
                Matrix out = u.adjoint() * ch.apply(projector(in)) * u;
                x += (d * out(j, j).real() - 1.0) / (d - 1.0);
            }
            x /= d;
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / samples;
        const double var = std::max(0.0, (sum2 - samples * mean * mean) / (samples - 1.0));
        r.p_hat = mean;
        r.std_error = std::sqrt(var / samples);
        r.samples = samples;
    } else {
        std::vector<Matrix> group = clifford_group(d);
        const bool skip_identity = mode == TwirlMode::CliffordWithoutIdentity;
        const std::size_t first = skip_identity ? 1 : 0;
        const double weight = 1.0 / static_cast<double>(group.size() - first);
        for (std::size_t g = first; g < group.size(); ++g) {
            accumulate_conjugated(choi, ch, group[g], weight);
        }
        r.samples = static_cast<int>(group.size() - first);
    }
    r.channel = KrausChannel::make(kraus_from_choi(choi, d), 1e-9);
    if (mode != TwirlMode::HaarSample) {
        r.p_hat = p_from_fidelity(d, jamiolkowski_fidelity(r.channel));
    }
    r.depolarizing_residual = depolarizing_residual(r.channel, r.p_hat);
    return r;
}

RecipeResult pdps_recipe(const Vector &psi, double f, std::uint64_t seed, int trials) {
    if (!(f >= 0.0 && f <= 1.0)) {
        std::ostringstream msg;
        msg << "pdps_recipe: f = " << f << " outside [0, 1]";
        throw Error(ErrorCode::FOutOfRange, msg.str());
    }
    if (trials < 2) {
        throw Error(ErrorCode::InvalidArgument, "pdps_recipe: trials < 2");
    }
    const int d = static_cast<int>(psi.size());
    if (d < 2 || std::abs(psi.norm() - 1.0) > 1e-10) {
        throw Error(ErrorCode::NonUnitVector, "pdps_recipe: psi must be a unit vector with D >= 2");
    }
    WeylBasis w = WeylBasis::make(d);
    Rng rng = make_rng(seed);
    std::bernoulli_distribution flip(1.0 - f);
    Matrix acc = Matrix::Zero(d, d);
    double sum = 0;
    double sum2 = 0;
    for (int t = 0; t < trials; ++t) {
        Matrix u = haar_unitary(d, rng);
        Vector out = psi;
        if (flip(rng)) {
            out = u.adjoint() * (w.X * (u * psi));
        }
        acc += out * out.adjoint();
        const double x = (d * std::norm(psi.dot(out)) - 1.0) / (d - 1.0);
        sum += x;
        sum2 += x * x;
    }
    acc /= static_cast<double>(trials);
    const double mean = sum / trials;
    const double var = std::max(0.0, (sum2 - trials * mean * mean) / (trials - 1.0));
    return RecipeResult{DensityMatrix::from_matrix(acc, 1e-10), p_from_fidelity(d, f), mean, std::sqrt(var / trials)};
}

DensityMatrix local_depolarize(const DensityMatrix &rho, int dA, int dB, double pA, double pB) {
    if (dA < 2 || dB < 2 || rho.dim() != dA * dB) {
        std::ostringstream msg;
        msg << "local_depolarize: dim " << rho.dim() << " vs " << dA << "*" << dB;
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
    require_cp_range(dA, pA, "local_depolarize (A)");
    require_cp_range(dB, pB, "local_depolarize (B)");
    const Matrix &m = rho.matrix();
    Matrix rA = partial_trace(m, dA, dB, Subsystem::A);
    Matrix rB = partial_trace(m, dA, dB, Subsystem::B);
    Matrix iA = Matrix::Identity(dA, dA) / static_cast<double>(dA);
    Matrix iB = Matrix::Identity(dB, dB) / static_cast<double>(dB);
    Matrix out = pA * pB * m + pA * (1 - pB) * tensor(rA, iB) + (1 - pA) * pB * tensor(iA, rB) +
                 (1 - pA) * (1 - pB) * tensor(iA, iB);
    return DensityMatrix::from_matrix(out, 1e-10);
}

}  // namespace dpskit
