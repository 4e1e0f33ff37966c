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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dpskit/bipartite.hpp"
#include "dpskit/bloch.hpp"
#include "dpskit/channels.hpp"
#include "dpskit/cli.hpp"
#include "dpskit/dps_metrics.hpp"
#include "dpskit/error.hpp"
#include "dpskit/moments.hpp"
#include "dpskit/random.hpp"

namespace py = pybind11;
using namespace dpskit;

namespace {

DensityMatrix as_state(const Matrix &m) {
    return DensityMatrix::from_matrix(m);
}

KrausChannel as_channel(const std::vector<Matrix> &kraus) {
    return KrausChannel::make(kraus);
}

TwirlMode parse_mode(const std::string &mode) {
    if (mode == "exact-clifford") {
        return TwirlMode::ExactClifford;
    }
    if (mode == "clifford-no-identity") {
        return TwirlMode::CliffordWithoutIdentity;
    }
    if (mode == "haar") {
        return TwirlMode::HaarSample;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown twirl mode " + mode);
}

py::dict report_dict(const EntanglementReport &r) {
    py::dict d;
    d["pt_spectrum"] = r.pt_spectrum;
    d["negativity"] = r.negativity;
    d["negative_count"] = r.negative_count;
    d["bound"] = r.bound;
    d["entangled"] = r.entangled;
    d["pair_threshold"] = r.pair_threshold;
    d["universal_threshold"] = r.universal_threshold;
    return d;
}

}  // namespace

PYBIND11_MODULE(_dpskit, m) {
    m.doc() = "Depolarized pure states: metrics, entanglement, channels and moments";

    static py::exception<Error> error(m, "DpskitError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error &e) {
            py::object cls = error;
            py::object exc = cls(e.what());
            exc.attr("code") = py::str(std::string(to_string(e.code())));
            PyErr_SetObject(cls.ptr(), exc.ptr());
        }
    });

    m.def("haar_state", [](int dim, std::uint64_t seed) {
        Rng rng = make_rng(seed);
        return haar_state(dim, rng);
    }, py::arg("dim"), py::arg("seed"));
    m.def("random_density", [](int dim, std::uint64_t seed) {
        Rng rng = make_rng(seed);
        return random_density(dim, rng).matrix();
    }, py::arg("dim"), py::arg("seed"));
    m.def("dps_density", [](const Vector &psi, double p) { return DpsState::make(psi, p).density().matrix(); },
          py::arg("psi"), py::arg("p"));

    m.def("fidelity_closed", [](const Vector &psi, double p, const Vector &phi, double q) {
        return fidelity_closed(DpsState::make(psi, p), DpsState::make(phi, q));
    }, py::arg("psi"), py::arg("p"), py::arg("phi"), py::arg("q"));
    m.def("trace_distance_closed", [](const Vector &psi, double p, const Vector &phi, double q) {
        return trace_distance_closed(DpsState::make(psi, p), DpsState::make(phi, q));
    }, py::arg("psi"), py::arg("p"), py::arg("phi"), py::arg("q"));
    m.def("fidelity_oracle", [](const Matrix &a, const Matrix &b) { return fidelity_oracle(as_state(a), as_state(b)); });
    m.def("trace_distance_oracle",
          [](const Matrix &a, const Matrix &b) { return trace_distance_oracle(as_state(a), as_state(b)); });

    m.def("dps_test", [](const Matrix &rho) { return dps_test(as_state(rho), SuBasis::generate(rho.rows())); },
          "Signed p if rho is a DPS, else None (|p| for D = 2).");

    m.def("schmidt_coefficients", [](const Vector &psi, int dA, int dB) { return schmidt_pure(psi, dA, dB).b; });
    m.def("pt_spectrum_closed", [](double p, const std::vector<double> &b, int dA, int dB) {
        return pt_spectrum_closed(p, b, dA, dB);
    });
    m.def("negativity", [](double p, const std::vector<double> &b, int dA, int dB, double neg_tol) {
        return report_dict(negativity(p, b, dA, dB, neg_tol));
    }, py::arg("p"), py::arg("b"), py::arg("dA"), py::arg("dB"), py::arg("neg_tol") = kNegTol);
    m.def("entanglement_of", [](const Matrix &rho, int dA, int dB, double neg_tol) {
        return report_dict(entanglement_of(as_state(rho), dA, dB, neg_tol));
    }, py::arg("rho"), py::arg("dA"), py::arg("dB"), py::arg("neg_tol") = kNegTol);

    m.def("depolarize", [](const Matrix &rho, double p) { return apply_depolarizing(as_state(rho), p).rho.matrix(); });
    m.def("protocol1", [](const Vector &psi, double beta2) {
        return protocol1(psi, ChiState::from_beta2(static_cast<int>(psi.size()), beta2)).matrix();
    });
    m.def("jamiolkowski_fidelity", [](const std::vector<Matrix> &kraus) { return jamiolkowski_fidelity(as_channel(kraus)); });
    m.def("twirl", [](const std::vector<Matrix> &kraus, const std::string &mode, int samples, std::uint64_t seed) {
        TwirlResult t = twirl(as_channel(kraus), parse_mode(mode), samples, seed);
        py::dict d;
        d["p_hat"] = t.p_hat;
        d["std_error"] = t.std_error;
        d["depolarizing_residual"] = t.depolarizing_residual;
        d["kraus"] = t.channel.kraus();
        return d;
    }, py::arg("kraus"), py::arg("mode"), py::arg("samples") = 0, py::arg("seed") = 0);

    m.def("moment_exact", [](const Matrix &rho, int k) { return moment_exact(as_state(rho), k).value; });
    m.def("moment_permutation", [](const Matrix &rho, int k) { return moment_permutation(as_state(rho), k).value; });
    m.def("moment_montecarlo", [](const Matrix &rho, int k, long long shots, std::uint64_t seed) {
        MomentEstimate e = moment_montecarlo(as_state(rho), k, shots, seed);
        return py::make_tuple(e.value, e.std_error);
    });
    m.def("dps_p_from_moments", [](double t2, double t3, int dim, double tol) {
        MomentFit f = dps_p_from_moments(t2, t3, dim, tol);
        return py::make_tuple(f.p, f.sign_resolved);
    }, py::arg("t2"), py::arg("t3"), py::arg("dim"), py::arg("tol") = kMomentFitTol);
    m.def("count_positive_charpoly", [](const Matrix &h) {
        CharpolyCount c = count_positive_charpoly(h);
        return py::make_tuple(c.positive, c.indeterminate);
    });

    m.def("cli", [](const std::vector<std::string> &args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, "Run one dpskit command line; returns (exit_code, stdout, stderr).");
}
