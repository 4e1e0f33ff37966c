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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpskit/error.hpp"

namespace dpskit {

namespace {

constexpr double kRangeSlack = 1e-12;

void require_same_dim(const DpsState &a, const DpsState &b, const char *what) {
    if (a.dim() != b.dim()) {
        std::ostringstream msg;
        msg << what << ": dimensions " << a.dim() << " and " << b.dim();
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
}

double clip(double x, double lo, double hi) {
    return std::clamp(x, lo, hi);
}

}  // namespace

double min_positive_polarization(int dim) {
    return -1.0 / (dim - 1.0);
}

double min_physical_polarization(int dim) {
    return -1.0 / (static_cast<double>(dim) * dim - 1.0);
}

DpsState DpsState::make(const Vector &pure, double p) {
    if (pure.size() < 2) {
        throw Error(ErrorCode::InvalidDimension, "DpsState: dimension < 2");
    }
    double norm = pure.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "DpsState: |pure| = " << norm;
        throw Error(ErrorCode::NonUnitVector, msg.str());
    }
    const int dim = static_cast<int>(pure.size());
    if (!(p >= min_positive_polarization(dim) - kRangeSlack && p <= 1.0 + kRangeSlack)) {
        std::ostringstream msg;
        msg << "DpsState: p = " << p << " outside [" << min_positive_polarization(dim) << ", 1]";
        throw Error(ErrorCode::PolarizationOutOfRange, msg.str());
    }
    return DpsState(pure, p);
}

DensityMatrix DpsState::density() const {
    const int d = dim();
    Matrix m = (1.0 - p_) / d * Matrix::Identity(d, d) + p_ * projector(pure_);
    return DensityMatrix::from_matrix(m, 1e-10);
}

double purification_overlap(const DpsState &a, const DpsState &b) {
    require_same_dim(a, b, "purification_overlap");
    return clip(std::norm(a.pure().dot(b.pure())), 0.0, 1.0);
}

namespace {

// 1 - |<a|b>|^2 as the squared norm of the part of b orthogonal to a. Taking
// the difference directly loses everything below 1e-16 near f = 1.
double one_minus_overlap(const DpsState &a, const DpsState &b) {
    const Vector &x = a.pure();
    const Vector &y = b.pure();
    return clip((y - x.dot(y) * x).squaredNorm(), 0.0, 1.0);
}

}  // namespace

double fidelity_closed(const DpsState &rho, const DpsState &sigma) {
    require_same_dim(rho, sigma, "fidelity_closed");
    const double D = rho.dim();
    const double p = rho.p();
    const double q = sigma.p();
    const double f = purification_overlap(rho, sigma);
    const double g = one_minus_overlap(rho, sigma);

    // sqrt(((D-1)p + 1)(1-p)) is D times the geometric mean of the two
    // distinct eigenvalues of rho.
    const double root = std::sqrt(std::max(0.0, ((D - 1) * p + 1) * (1 - p)));
    const double a = (1 - p) * (1 - q) / (D * D);
    const double b = (1 - p) * q / D;
    const double c = q / D * (root - (1 - p));
    const double d = (1 - q + D * q * f) / (D * D) * ((D - 2) * p + 2 - 2 * root) +
                     2 * (1 - q) / (D * D) * (root - (1 - p));

    const double mid = (2 * a + (b + 2 * c) * f + d + b * g) / 2;
    const double lin = (b + 2 * c) * f + d - b * g;
    const double disc = std::sqrt(std::max(0.0, lin * lin / 4 + (b + c) * (b + c) * g * f));
    const double sqrt_f =
        (D - 2) * std::sqrt(std::max(0.0, a)) + std::sqrt(std::max(0.0, mid + disc)) + std::sqrt(std::max(0.0, mid - disc));
    return clip(sqrt_f * sqrt_f, 0.0, 1.0);
}

double fidelity_oracle(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "fidelity_oracle: dimensions differ");
    }
    Matrix sr = sqrt_psd(rho.matrix());
    if (!sigma.is_positive()) {
        throw Error(ErrorCode::NotPSD, "fidelity_oracle: sigma is not positive");
    }
    Matrix inner = sr * sigma.matrix() * sr;
    RealVector ev = eigenvalues_hermitian(0.5 * (inner + inner.adjoint()));
    double s = 0;
    for (double v : ev) {
        s += v > 0 ? std::sqrt(v) : 0.0;
    }
    return clip(s * s, 0.0, 1.0);
}

double trace_distance_closed(const DpsState &rho, const DpsState &sigma) {
    require_same_dim(rho, sigma, "trace_distance_closed");
    const double D = rho.dim();
    const double p = rho.p();
    const double q = sigma.p();
    const double f = purification_overlap(rho, sigma);
    const double g = one_minus_overlap(rho, sigma);
    const double shift = (q - p) * (1 - D / 2) / D;
    const double half_sum = (p - q + 2 * q * g) / 2;
    const double r = std::sqrt(std::max(0.0, half_sum * half_sum + q * q * g * f));
    const double t = 0.5 * ((D - 2) * std::abs(q - p) / D + std::abs(shift + r) + std::abs(shift - r));
    return clip(t, 0.0, 1.0);
}

double trace_distance_oracle(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "trace_distance_oracle: dimensions differ");
    }
    return clip(0.5 * trace_norm(rho.matrix() - sigma.matrix()), 0.0, 1.0);
}

DistanceReport distances_from(double fidelity, double trace_distance) {
    DistanceReport r;
    r.fidelity = clip(fidelity, 0.0, 1.0);
    r.trace_distance = clip(trace_distance, 0.0, 1.0);
    const double root = std::sqrt(r.fidelity);
    r.bures = std::sqrt(std::max(0.0, 2 - 2 * root));
    r.angle = std::acos(clip(root, 0.0, 1.0));
    return r;
}

double fuchs_violation(const DistanceReport &r) {
    const double lower = r.bures * r.bures / 2 - r.trace_distance;
    const double upper = r.trace_distance - std::sqrt(std::max(0.0, 1 - r.fidelity));
    return std::max(lower, upper);
}

DistanceReport distance_report(const DpsState &rho, const DpsState &sigma) {
    DistanceReport r = distances_from(fidelity_closed(rho, sigma), trace_distance_closed(rho, sigma));
    double violation = fuchs_violation(r);
    if (violation > kFuchsTol) {
        std::ostringstream msg;
        msg << "Fuchs-van de Graaf chain violated by " << violation << " (F=" << r.fidelity
            << ", T=" << r.trace_distance << ")";
        throw Error(ErrorCode::InequalityViolation, msg.str());
    }
    return r;
}

}  // namespace dpskit
