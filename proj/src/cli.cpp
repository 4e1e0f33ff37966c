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

#include "dpskit/cli.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "CLI11.hpp"

#include "dpskit/bipartite.hpp"
#include "dpskit/bloch.hpp"
#include "dpskit/channels.hpp"
#include "dpskit/dps_metrics.hpp"
#include "dpskit/error.hpp"
#include "dpskit/moments.hpp"
#include "dpskit/random.hpp"
#include "dpskit/state_io.hpp"

namespace dpskit::cli {

namespace {

using io::Json;

constexpr double kOracleTol = 1e-8;

/// Accepts decimal numbers and fractions such as "1/3" or "-1/80".
double parse_real(const std::string &text, const char *what) {
    auto parse_one = [&](std::string_view s) {
        double v = 0;
        const char *begin = s.data();
        const char *end = s.data() + s.size();
        if (begin != end && *begin == '+') {
            ++begin;
        }
        auto res = std::from_chars(begin, end, v);
        if (res.ec != std::errc() || res.ptr != end) {
            throw io::FormatError(std::string("--") + what + ": cannot parse \"" + text + "\" as a number");
        }
        return v;
    };
    std::string_view s = text;
    auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        return parse_one(s);
    }
    double den = parse_one(s.substr(slash + 1));
    if (den == 0) {
        throw io::FormatError(std::string("--") + what + ": zero denominator");
    }
    return parse_one(s.substr(0, slash)) / den;
}

Json vec_json(const RealVector &v) {
    Json a = Json::array();
    for (double x : v) {
        a.push_back(x);
    }
    return a;
}

Json vec_json(const std::vector<double> &v) {
    Json a = Json::array();
    for (double x : v) {
        a.push_back(x);
    }
    return a;
}

/// Eigenvector carrying the non-degenerate DPS eigenvalue.
Vector dps_purification(const DensityMatrix &rho, double p) {
    if (p == 0) {
        return Vector::Unit(rho.dim(), 0);
    }
    Spectrum s = eig_hermitian(rho.matrix());
    Vector v = p > 0 ? Vector(s.vectors.col(s.values.size() - 1)) : Vector(s.vectors.col(0));
    return v / v.norm();
}

/// Pure state carried by a rank-one density matrix.
Vector pure_of(const DensityMatrix &rho, const char *what) {
    Spectrum s = eig_hermitian(rho.matrix());
    const Eigen::Index top = s.values.size() - 1;
    if (std::abs(s.values[top] - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << what << ": state is not pure (largest eigenvalue " << s.values[top] << ")";
        throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    Vector v = s.vectors.col(top);
    return v / v.norm();
}

std::array<int, 2> resolve_dims(const io::StateFile &sf, const std::vector<int> &flag) {
    std::array<int, 2> dims{};
    if (flag.size() == 2) {
        dims = {flag[0], flag[1]};
    } else if (sf.dims) {
        dims = *sf.dims;
    } else {
        throw Error(ErrorCode::InvalidArgument, "bipartite dimensions needed: pass --dims dA dB");
    }
    if (dims[0] < 1 || dims[1] < 1 || dims[0] * dims[1] != sf.rho.dim()) {
        std::ostringstream msg;
        msg << "--dims " << dims[0] << " " << dims[1] << " does not factor D = " << sf.rho.dim();
        throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
    return dims;
}

Json report_json(const DistanceReport &r) {
    Json j;
    j["fidelity"] = r.fidelity;
    j["trace_distance"] = r.trace_distance;
    j["bures"] = r.bures;
    j["angle"] = r.angle;
    j["fuchs_violation"] = fuchs_violation(r);
    return j;
}

Json entanglement_json(const EntanglementReport &r) {
    Json j;
    j["pt_spectrum"] = vec_json(r.pt_spectrum);
    j["negativity"] = r.negativity;
    j["negative_count"] = r.negative_count;
    j["bound"] = r.bound;
    j["entangled"] = r.entangled;
    j["pair_threshold"] = r.pair_threshold;
    j["universal_threshold"] = r.universal_threshold;
    j["caveat"] = r.caveat;
    return j;
}

/// Everything the subcommands read from the command line.
struct Options {
    std::vector<std::string> args;

    std::string state;
    std::string state_b;
    std::string channel_file;
    std::string out_path;
    std::string method = "closed";
    std::string mode;
    std::vector<int> dims;
    std::vector<int> moments_m{2, 3};
    std::vector<std::string> b_list;
    int dim = 0;
    int fig_dim = 9;
    int dA = 0;
    int grid = 50;
    int samples = 2000;
    int trials = 10000;
    long long shots = 10000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool require_cp = false;
    bool assume_dps = false;

    std::string p = "0";
    std::string q;
    std::string f = "1";
    std::string big_f = "1";
    std::string beta2 = "0";
    std::string omega = "0";
    std::string pA = "1";
    std::string pB = "1";
    std::string weight = "0.5";
    std::string shift_f;

    double input_tol = kHermitianTol;
    double star_tol = kDpsStarTol;
    double spectrum_tol = kDpsSpectrumTol;
    double neg_tol = kNegTol;
    double oracle_tol = kOracleTol;
    double fit_tol = kMomentFitTol;
    double consistency_tol = kConsistencyTol;
};

/// Common report envelope. Results and checks are filled by the command.
class Report {
   public:
    Report(const std::string &command, const Options &o) {
        j_["command"] = command;
        j_["args"] = o.args;
        digest_ = io::fnv1a(command);
    }
    void add_input(const std::string &text) {
        digest_ = io::fnv1a(text, io::fnv1a("\x1f", digest_));
    }
    void add_args(const Options &o) {
        for (const auto &a : o.args) {
            digest_ = io::fnv1a(a, io::fnv1a("\x1f", digest_));
        }
    }
    void seed(std::uint64_t s) {
        seed_ = s;
    }
    Json &tolerances() {
        return tol_;
    }
    Json &results() {
        return results_;
    }
    Json &checks() {
        return checks_;
    }
    std::string str() {
        j_["input_digest"] = "fnv1a64:" + io::hex64(digest_);
        if (seed_) {
            j_["seed"] = *seed_;
        }
        j_["tolerances"] = tol_.is_null() ? Json::object() : tol_;
        j_["results"] = results_.is_null() ? Json::object() : results_;
        j_["checks"] = checks_.is_null() ? Json::object() : checks_;
        return io::dump(j_);
    }

   private:
    Json j_;
    Json tol_;
    Json results_;
    Json checks_;
    std::uint64_t digest_;
    std::optional<std::uint64_t> seed_;
};

io::StateFile load_state(Report &r, const std::string &path, double tol) {
    std::string text = io::read_file(path);
    r.add_input(text);
    return io::parse_state(text, tol);
}

/// Outputs that must only be written once the command has succeeded.
struct Pending {
    std::string stdout_text;
    std::vector<std::pair<std::string, std::string>> files;
};

Pending with_optional_state(Report &r, const Options &o, const Matrix &rho,
                            std::optional<std::array<int, 2>> dims = std::nullopt) {
    Pending out;
    if (!o.out_path.empty()) {
        out.files.emplace_back(o.out_path, io::dump(io::state_json(rho, dims)));
        r.results()["output"] = o.out_path;
    } else {
        r.results()["state"] = io::state_json(rho, dims);
    }
    out.stdout_text = r.str();
    return out;
}

// ---------------------------------------------------------------------------
// Commands.

Pending cmd_analyze(const Options &o) {
    Report r("analyze", o);
    auto sf = load_state(r, o.state, o.input_tol);
    const int d = sf.rho.dim();
    r.tolerances()["input_tol"] = o.input_tol;
    r.tolerances()["star_tol"] = o.star_tol;
    r.tolerances()["spectrum_tol"] = o.spectrum_tol;
    if (d < 2) {
        throw Error(ErrorCode::InvalidDimension, "analyze: D < 2");
    }
    SuBasis basis = SuBasis::generate(d);
    DpsVerdict v = dps_verdict(sf.rho, basis, {o.star_tol, o.spectrum_tol});
    CoherenceVector n = to_coherence(sf.rho, basis);
    Json &res = r.results();
    res["dim"] = d;
    res["eigenvalues"] = vec_json(eigenvalues_hermitian(sf.rho.matrix()));
    res["coherence_norm"] = v.coherence_norm;
    if (d > 2) {
        res["invariant_ladder"] = vec_json(invariant_ladder(n, basis, 3));
    } else {
        res["invariant_ladder"] = nullptr;
    }
    res["verdict"] = v.p ? "DPS" : "NOT-DPS";
    res["p"] = v.p ? Json(*v.p) : Json(nullptr);
    res["sign_convention"] = d == 2 ? "D = 2: p reported as |n| >= 0 (sign not observable)"
                                    : "sign of p from (n*n).n";
    res["star_residual"] = v.star_residual;
    res["spectrum_residual"] = v.spectrum_residual;
    res["min_eigenvalue"] = v.min_eigenvalue;
    res["reason"] = v.reason;
    r.checks()["hermitian_unit_trace"] = true;
    r.checks()["spectrum_pattern"] = v.p.has_value();
    return Pending{r.str(), {}};
}

Pending cmd_distance(const Options &o) {
    Report r("distance", o);
    auto a = load_state(r, o.state, o.input_tol);
    auto b = load_state(r, o.state_b, o.input_tol);
    if (a.rho.dim() != b.rho.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "distance: states have different dimensions");
    }
    if (o.method != "closed" && o.method != "oracle" && o.method != "both") {
        throw io::FormatError("--method must be closed, oracle or both");
    }
    const int d = a.rho.dim();
    r.tolerances()["input_tol"] = o.input_tol;
    r.tolerances()["fuchs_tol"] = kFuchsTol;
    Json &res = r.results();
    res["dim"] = d;

    std::optional<DistanceReport> closed;
    std::optional<DistanceReport> oracle;
    if (o.method != "oracle") {
        r.tolerances()["star_tol"] = o.star_tol;
        r.tolerances()["spectrum_tol"] = o.spectrum_tol;
        SuBasis basis = SuBasis::generate(d);
        DpsVerdict va = dps_verdict(a.rho, basis, {o.star_tol, o.spectrum_tol});
        DpsVerdict vb = dps_verdict(b.rho, basis, {o.star_tol, o.spectrum_tol});
        if (!va.p || !vb.p) {
            throw Error(ErrorCode::NotDPS, std::string("closed method needs DPS inputs: ") +
                                               (va.p ? "second state: " + vb.reason : "first state: " + va.reason));
        }
        DpsState sa = DpsState::make(dps_purification(a.rho, *va.p), *va.p);
        DpsState sb = DpsState::make(dps_purification(b.rho, *vb.p), *vb.p);
        res["p"] = sa.p();
        res["q"] = sb.p();
        res["f"] = purification_overlap(sa, sb);
        closed = distance_report(sa, sb);
        res["closed"] = report_json(*closed);
    }
    if (o.method != "closed") {
        DistanceReport rep = distances_from(fidelity_oracle(a.rho, b.rho), trace_distance_oracle(a.rho, b.rho));
        oracle = rep;
        res["oracle"] = report_json(rep);
    }
    const DistanceReport &main = closed ? *closed : *oracle;
    r.checks()["fuchs_chain"] = fuchs_violation(main) <= kFuchsTol;
    if (closed && oracle) {
        r.tolerances()["oracle_tol"] = o.oracle_tol;
        const double df = std::abs(closed->fidelity - oracle->fidelity);
        const double dt = std::abs(closed->trace_distance - oracle->trace_distance);
        res["delta"] = Json{{"fidelity", df}, {"trace_distance", dt}};
        if (df > o.oracle_tol || dt > o.oracle_tol) {
            std::ostringstream msg;
            msg << "closed form disagrees with oracle: dF = " << df << ", dT = " << dt;
            throw Error(ErrorCode::InequalityViolation, msg.str());
        }
        r.checks()["closed_matches_oracle"] = true;
    }
    return Pending{r.str(), {}};
}

Pending cmd_entanglement(const Options &o) {
    Report r("entanglement", o);
    auto sf = load_state(r, o.state, o.input_tol);
    auto [dA, dB] = resolve_dims(sf, o.dims);
    if (dA > dB) {
        throw Error(ErrorCode::RequiresDALeDB, "entanglement: order the factors so that dA <= dB");
    }
    r.tolerances()["input_tol"] = o.input_tol;
    r.tolerances()["neg_tol"] = o.neg_tol;
    r.tolerances()["oracle_tol"] = o.oracle_tol;
    Json &res = r.results();
    res["dims"] = Json::array({dA, dB});
    EntanglementReport brute = entanglement_of(sf.rho, dA, dB, o.neg_tol);
    res["partial_transpose"] = entanglement_json(brute);
    r.checks()["count_within_bound"] = brute.negative_count <= brute.bound;

    SuBasis basis = SuBasis::generate(dA * dB);
    DpsVerdict v = dps_verdict(sf.rho, basis, {o.star_tol, o.spectrum_tol});
    if (!v.p) {
        res["dps"] = nullptr;
        return Pending{r.str(), {}};
    }
    Json dps;
    dps["p"] = *v.p;
    if (std::abs(*v.p) < o.spectrum_tol) {
        dps["note"] = "p = 0: maximally mixed, no Schmidt data";
        res["dps"] = dps;
        return Pending{r.str(), {}};
    }
    DpsSchmidt s = schmidt_dps(sf.rho, dA, dB, basis, {o.star_tol, o.spectrum_tol});
    std::vector<double> b(s.form.b.data(), s.form.b.data() + s.form.b.size());
    EntanglementReport closed = negativity(s.p, b, dA, dB, o.neg_tol);
    dps["schmidt"] = vec_json(b);
    dps["closed_form"] = entanglement_json(closed);
    const double delta = (closed.pt_spectrum - brute.pt_spectrum).cwiseAbs().maxCoeff();
    dps["spectrum_delta"] = delta;
    res["dps"] = dps;
    if (delta > o.oracle_tol) {
        std::ostringstream msg;
        msg << "closed-form PT spectrum disagrees with brute force by " << delta;
        throw Error(ErrorCode::InequalityViolation, msg.str());
    }
    r.checks()["closed_matches_brute_force"] = true;
    return Pending{r.str(), {}};
}

Pending cmd_schmidt(const Options &o) {
    Report r("schmidt", o);
    auto sf = load_state(r, o.state, o.input_tol);
    auto [dA, dB] = resolve_dims(sf, o.dims);
    r.tolerances()["input_tol"] = o.input_tol;
    r.tolerances()["star_tol"] = o.star_tol;
    r.tolerances()["spectrum_tol"] = o.spectrum_tol;
    SuBasis basis = SuBasis::generate(dA * dB);
    DpsSchmidt s = schmidt_dps(sf.rho, dA, dB, basis, {o.star_tol, o.spectrum_tol});
    DensityMatrix back = dps_from_schmidt(s.p, s.form);
    std::vector<double> b(s.form.b.data(), s.form.b.data() + s.form.b.size());
    Json &res = r.results();
    res["dims"] = Json::array({dA, dB});
    res["p"] = s.p;
    res["schmidt"] = vec_json(b);
    res["reconstruction_error"] = (back.matrix() - sf.rho.matrix()).cwiseAbs().maxCoeff();
    Matrix rhoA = partial_trace(sf.rho.matrix(), dA, dB, Subsystem::A);
    Matrix rhoB = partial_trace(sf.rho.matrix(), dA, dB, Subsystem::B);
    res["marginal_a"] = vec_json(eigenvalues_hermitian(rhoA));
    res["marginal_b"] = vec_json(eigenvalues_hermitian(rhoB));
    res["predicted_a"] = vec_json(reduced_spectrum_dps(s.p, b, dA, dA));
    res["predicted_b"] = vec_json(reduced_spectrum_dps(s.p, b, dB, dA));
    r.checks()["reconstructs"] = res["reconstruction_error"].get<double>() <= 1e-8;
    return Pending{r.str(), {}};
}

Pending cmd_consistency(const Options &o) {
    Report r("consistency", o);
    auto a = load_state(r, o.state, o.input_tol);
    auto b = load_state(r, o.state_b, o.input_tol);
    r.tolerances()["consistency_tol"] = o.consistency_tol;
    ConsistencyReport c = consistency_check(a.rho, b.rho, o.consistency_tol);
    Json &res = r.results();
    res["verdict"] = c.verdict == ConsistencyVerdict::Consistent ? "consistent" : "rejected";
    res["reason"] = c.reason;
    res["p"] = c.p ? Json(*c.p) : Json(nullptr);
    res["schmidt"] = vec_json(c.b);
    return Pending{r.str(), {}};
}

Pending cmd_isotropic(const Options &o) {
    Report r("isotropic", o);
    r.add_args(o);
    const double F = parse_real(o.big_f, "F");
    IsotropicState iso = isotropic(o.dA, F);
    std::vector<double> b(o.dA, 1.0 / std::sqrt(static_cast<double>(o.dA)));
    EntanglementReport e = negativity(iso.p, b, o.dA, o.dA, o.neg_tol);
    r.tolerances()["neg_tol"] = o.neg_tol;
    Json &res = r.results();
    res["dA"] = o.dA;
    res["F"] = F;
    res["p"] = iso.p;
    res["separable"] = iso.separable;
    res["entanglement"] = entanglement_json(e);
    res["p_threshold"] = 1.0 / (o.dA + 1.0);
    r.checks()["ppt_matches_separability"] = e.entangled == !iso.separable;
    return with_optional_state(r, o, iso.state.density().matrix(), std::array<int, 2>{o.dA, o.dA});
}

Pending cmd_werner2q(const Options &o) {
    Report r("werner2q", o);
    r.add_args(o);
    const double p = parse_real(o.p, "p");
    const double omega = parse_real(o.omega, "omega");
    TwoQubitCanonical t = two_qubit_canonical(p, omega);
    EntanglementReport e = entanglement_of(t.rho, 2, 2, o.neg_tol);
    r.tolerances()["neg_tol"] = o.neg_tol;
    Json &res = r.results();
    res["p"] = p;
    res["omega"] = omega;
    res["mu"] = Json::array({t.mu[0], t.mu[1], t.mu[2], t.mu[3]});
    res["predicted_entangled"] = two_qubit_entangled_condition(p, omega);
    res["partial_transpose"] = entanglement_json(e);
    std::vector<double> mu(t.mu.begin(), t.mu.end());
    std::sort(mu.begin(), mu.end());
    r.checks()["mu_matches_brute_force"] =
        (Eigen::Map<RealVector>(mu.data(), 4) - e.pt_spectrum).cwiseAbs().maxCoeff() <= 1e-10;
    return with_optional_state(r, o, t.rho.matrix(), std::array<int, 2>{2, 2});
}

Pending cmd_depolarize(const Options &o) {
    Report r("channel depolarize", o);
    auto sf = load_state(r, o.state, o.input_tol);
    r.add_args(o);
    const double p = parse_real(o.p, "p");
    DepolarizedState out = apply_depolarizing(sf.rho, p);
    if (o.require_cp && !out.physically_realizable) {
        std::ostringstream msg;
        msg << "p = " << p << " is outside the CP range [" << min_physical_polarization(sf.rho.dim()) << ", 1]";
        throw Error(ErrorCode::PolarizationOutOfRange, msg.str());
    }
    r.results()["p"] = p;
    r.results()["physically_realizable"] = out.physically_realizable;
    r.results()["cp_lower_bound"] = min_physical_polarization(sf.rho.dim());
    return with_optional_state(r, o, out.rho.matrix(), sf.dims);
}

Pending cmd_protocol1(const Options &o) {
    Report r("channel protocol1", o);
    r.add_args(o);
    Vector psi;
    if (!o.state.empty()) {
        auto sf = load_state(r, o.state, o.input_tol);
        psi = pure_of(sf.rho, "protocol1");
    } else {
        if (o.dim < 2 || !o.seed_given) {
            throw Error(ErrorCode::InvalidArgument, "protocol1: give a pure-state file or --dim and --seed");
        }
        Rng rng = make_rng(o.seed);
        psi = haar_state(o.dim, rng);
        r.seed(o.seed);
    }
    const int d = static_cast<int>(psi.size());
    ChiState chi = ChiState::from_beta2(d, parse_real(o.beta2, "beta2"));
    DensityMatrix sim = protocol1(psi, chi);
    DensityMatrix formula = protocol1_formula(psi, chi);
    const double delta = trace_distance_oracle(sim, formula);
    r.tolerances()["protocol_tol"] = 1e-10;
    r.results()["dim"] = d;
    r.results()["alpha"] = chi.alpha.real();
    r.results()["beta2"] = std::norm(chi.beta);
    r.results()["p"] = 1.0 - std::norm(chi.beta);
    r.results()["trace_distance_to_formula"] = delta;
    r.checks()["matches_formula"] = delta <= 1e-10;
    if (delta > 1e-10) {
        std::ostringstream msg;
        msg << "protocol1 simulation deviates from the residual formula by " << delta;
        throw Error(ErrorCode::InequalityViolation, msg.str());
    }
    return with_optional_state(r, o, sim.matrix());
}

Pending cmd_twirl(const Options &o) {
    Report r("channel twirl", o);
    r.add_args(o);
    std::optional<KrausChannel> ch;
    if (!o.channel_file.empty()) {
        std::string text = io::read_file(o.channel_file);
        r.add_input(text);
        ch = io::parse_channel(text);
    } else if (!o.shift_f.empty()) {
        if (o.dim < 2) {
            throw Error(ErrorCode::InvalidArgument, "twirl: --shift-f needs --dim");
        }
        ch = shift_channel(o.dim, parse_real(o.shift_f, "shift-f"));
    } else {
        throw Error(ErrorCode::InvalidArgument, "twirl: give a channel file or --shift-f with --dim");
    }
    TwirlMode mode;
    if (o.mode == "exact-clifford") {
        mode = TwirlMode::ExactClifford;
    } else if (o.mode == "clifford-no-identity") {
        mode = TwirlMode::CliffordWithoutIdentity;
    } else if (o.mode == "haar") {
        mode = TwirlMode::HaarSample;
        if (!o.seed_given) {
            throw Error(ErrorCode::InvalidArgument, "twirl: --mode haar needs --seed");
        }
        r.seed(o.seed);
    } else {
        throw io::FormatError("--mode must be exact-clifford, clifford-no-identity or haar");
    }
    const double f = jamiolkowski_fidelity(*ch);
    TwirlResult t = twirl(*ch, mode, o.samples, o.seed);
    Json &res = r.results();
    res["dim"] = ch->dim();
    res["mode"] = o.mode;
    res["jamiolkowski_fidelity"] = f;
    res["p_formula"] = p_from_fidelity(ch->dim(), f);
    res["p_hat"] = t.p_hat;
    res["std_error"] = t.std_error;
    res["samples"] = t.samples;
    res["depolarizing_residual"] = t.depolarizing_residual;
    r.tolerances()["depolarizing_tol"] = 1e-10;
    r.checks()["depolarizing"] = t.depolarizing_residual <= 1e-10;
    Pending out;
    if (!o.out_path.empty()) {
        out.files.emplace_back(o.out_path, io::dump(io::channel_json(t.channel)));
        res["output"] = o.out_path;
    }
    out.stdout_text = r.str();
    return out;
}

Pending cmd_recipe(const Options &o) {
    Report r("channel recipe", o);
    r.add_args(o);
    if (!o.seed_given) {
        throw Error(ErrorCode::InvalidArgument, "recipe: --seed is required");
    }
    r.seed(o.seed);
    Vector psi;
    if (!o.state.empty()) {
        auto sf = load_state(r, o.state, o.input_tol);
        psi = pure_of(sf.rho, "recipe");
    } else {
        if (o.dim < 2) {
            throw Error(ErrorCode::InvalidArgument, "recipe: give --psi or --dim");
        }
        Rng rng = make_rng(o.seed, 1);
        psi = haar_state(o.dim, rng);
    }
    RecipeResult rr = pdps_recipe(psi, parse_real(o.f, "f"), o.seed, o.trials);
    DpsState target = DpsState::make(psi, rr.p_expected);
    Json &res = r.results();
    res["dim"] = static_cast<int>(psi.size());
    res["trials"] = o.trials;
    res["p_expected"] = rr.p_expected;
    res["p_estimate"] = rr.p_estimate;
    res["std_error"] = rr.std_error;
    res["trace_distance_to_target"] = trace_distance_oracle(rr.rho, target.density());
    r.checks()["within_3_std_error"] = std::abs(rr.p_estimate - rr.p_expected) <= 3 * rr.std_error;
    return with_optional_state(r, o, rr.rho.matrix());
}

Pending cmd_local(const Options &o) {
    Report r("channel local", o);
    auto sf = load_state(r, o.state, o.input_tol);
    r.add_args(o);
    auto [dA, dB] = resolve_dims(sf, o.dims);
    const double pA = parse_real(o.pA, "pA");
    const double pB = parse_real(o.pB, "pB");
    DensityMatrix out = local_depolarize(sf.rho, dA, dB, pA, pB);
    SuBasis basis = SuBasis::generate(dA * dB);
    DpsVerdict v = dps_verdict(out, basis, {o.star_tol, o.spectrum_tol});
    Json &res = r.results();
    res["pA"] = pA;
    res["pB"] = pB;
    res["coefficients"] = Json::array({pA * pB, pA * (1 - pB), (1 - pA) * pB, (1 - pA) * (1 - pB)});
    res["output_verdict"] = v.p ? "DPS" : "NOT-DPS";
    res["output_p"] = v.p ? Json(*v.p) : Json(nullptr);
    res["reason"] = v.reason;
    r.tolerances()["star_tol"] = o.star_tol;
    r.tolerances()["spectrum_tol"] = o.spectrum_tol;
    return with_optional_state(r, o, out.matrix(), std::array<int, 2>{dA, dB});
}

Pending cmd_moments(const Options &o) {
    Report r("moments", o);
    auto sf = load_state(r, o.state, o.input_tol);
    r.add_args(o);
    const int d = sf.rho.dim();
    auto estimate = [&](int m) {
        if (o.mode == "exact") {
            return moment_exact(sf.rho, m);
        }
        if (o.mode == "perm") {
            return moment_permutation(sf.rho, m);
        }
        if (o.mode == "mc") {
            return moment_montecarlo(sf.rho, m, o.shots, o.seed);
        }
        throw io::FormatError("--mode must be exact, perm or mc");
    };
    if (o.mode == "mc") {
        if (!o.seed_given) {
            throw Error(ErrorCode::InvalidArgument, "moments: --mode mc needs --seed");
        }
        r.seed(o.seed);
    }
    Json list = Json::array();
    for (int m : o.moments_m) {
        MomentEstimate e = estimate(m);
        Json j;
        j["m"] = m;
        j["value"] = e.value;
        j["method"] = std::string(to_string(e.method));
        j["shots"] = e.shots;
        j["std_error"] = e.std_error;
        j["exact"] = moment_exact(sf.rho, m).value;
        list.push_back(j);
    }
    Json &res = r.results();
    res["dim"] = d;
    res["moments"] = list;
    if (o.assume_dps) {
        r.tolerances()["fit_tol"] = o.fit_tol;
        const double t2 = estimate(2).value;
        const double t3 = estimate(3).value;
        MomentFit fit = dps_p_from_moments(t2, t3, d, o.fit_tol);
        res["dps_fit"] = Json{{"t2", t2},
                              {"t3", t3},
                              {"p", fit.p},
                              {"sign_resolved", fit.sign_resolved},
                              {"t3_residual", fit.t3_residual}};
    }
    return Pending{r.str(), {}};
}

Pending cmd_fig1(const Options &o) {
    if (o.grid < 2) {
        throw Error(ErrorCode::InvalidArgument, "fig1: --grid must be >= 2");
    }
    if (o.fig_dim < 2) {
        throw Error(ErrorCode::InvalidDimension, "fig1: --dim must be >= 2");
    }
    const int d = o.fig_dim;
    const double lo = min_physical_polarization(d);
    std::string csv = "p,f,bures,trace_distance,sqrt_one_minus_F\n";
    Vector e0 = Vector::Unit(d, 0);
    Vector e1 = Vector::Unit(d, 1);
    for (int i = 0; i < o.grid; ++i) {
        const double p = i == o.grid - 1 ? 1.0 : lo + (1.0 - lo) * i / (o.grid - 1);
        for (int k = 0; k < o.grid; ++k) {
            const double f = k == o.grid - 1 ? 1.0 : static_cast<double>(k) / (o.grid - 1);
            Vector phi = std::sqrt(f) * e0 + std::sqrt(1.0 - f) * e1;
            DistanceReport rep = distance_report(DpsState::make(e0, p), DpsState::make(phi / phi.norm(), p));
            csv += io::format_double(p) + "," + io::format_double(f) + "," + io::format_double(rep.bures) + "," +
                   io::format_double(rep.trace_distance) + "," +
                   io::format_double(std::sqrt(std::max(0.0, 1.0 - rep.fidelity))) + "\n";
        }
    }
    Pending out;
    if (!o.out_path.empty()) {
        out.files.emplace_back(o.out_path, csv);
    } else {
        out.stdout_text = csv;
    }
    return out;
}

Pending gen_output(const Options &o, const Matrix &rho, std::optional<std::array<int, 2>> dims) {
    Pending out;
    std::string text = io::dump(io::state_json(rho, dims));
    if (!o.out_path.empty()) {
        out.files.emplace_back(o.out_path, text);
    } else {
        out.stdout_text = text;
    }
    return out;
}

std::optional<std::array<int, 2>> gen_dims(const Options &o, int d) {
    if (o.dims.empty()) {
        return std::nullopt;
    }
    if (o.dims.size() != 2 || o.dims[0] * o.dims[1] != d) {
        throw Error(ErrorCode::DimensionMismatch, "--dims does not factor --dim");
    }
    return std::array<int, 2>{o.dims[0], o.dims[1]};
}

Pending cmd_gen(const std::string &kind, const Options &o) {
    if (kind == "isotropic") {
        IsotropicState iso = isotropic(o.dA, parse_real(o.big_f, "F"));
        return gen_output(o, iso.state.density().matrix(), std::array<int, 2>{o.dA, o.dA});
    }
    if (kind == "schmidt") {
        if (o.dims.size() != 2) {
            throw Error(ErrorCode::InvalidArgument, "gen schmidt: --dims dA dB is required");
        }
        const int dA = o.dims[0];
        const int dB = o.dims[1];
        if (dA > dB) {
            throw Error(ErrorCode::RequiresDALeDB, "gen schmidt: dA > dB");
        }
        if (o.b_list.empty() || static_cast<int>(o.b_list.size()) > dA) {
            throw Error(ErrorCode::InvalidSchmidtVector, "gen schmidt: give between 1 and dA coefficients with --b");
        }
        SchmidtForm form;
        form.dA = dA;
        form.dB = dB;
        form.b = RealVector::Zero(dA);
        for (std::size_t i = 0; i < o.b_list.size(); ++i) {
            form.b[static_cast<Eigen::Index>(i)] = parse_real(o.b_list[i], "b");
        }
        if (form.b.minCoeff() < 0 || form.b.norm() == 0) {
            throw Error(ErrorCode::InvalidSchmidtVector, "gen schmidt: coefficients must be nonnegative, not all 0");
        }
        form.b /= form.b.norm();
        if (o.seed_given) {
            Rng rng = make_rng(o.seed);
            form.U = haar_unitary(dA, rng);
            form.V = haar_unitary(dB, rng);
        } else {
            form.U = Matrix::Identity(dA, dA);
            form.V = Matrix::Identity(dB, dB);
        }
        const double p = parse_real(o.p, "p");
        return gen_output(o, dps_from_schmidt(p, form).matrix(), std::array<int, 2>{dA, dB});
    }
    if (o.dim < 2) {
        throw Error(ErrorCode::InvalidDimension, "gen: --dim must be >= 2");
    }
    if (!o.seed_given) {
        throw Error(ErrorCode::InvalidArgument, "gen: --seed is required");
    }
    Rng rng = make_rng(o.seed);
    auto dims = gen_dims(o, o.dim);
    if (kind == "dps") {
        Vector psi = haar_state(o.dim, rng);
        return gen_output(o, DpsState::make(psi, parse_real(o.p, "p")).density().matrix(), dims);
    }
    if (kind == "haar-pure") {
        return gen_output(o, projector(haar_state(o.dim, rng)), dims);
    }
    // mixture
    const double w = parse_real(o.weight, "weight");
    if (!(w >= 0 && w <= 1)) {
        throw Error(ErrorCode::InvalidArgument, "gen mixture: --weight outside [0, 1]");
    }
    Vector a = haar_state(o.dim, rng);
    Vector b = haar_state(o.dim, rng);
    Matrix m = w * projector(a) + (1 - w) * projector(b);
    return gen_output(o, 0.5 * (m + m.adjoint()), dims);
}

void add_state_tolerances(CLI::App *sub, Options &o) {
    sub->add_option("--input-tol", o.input_tol, "Hermiticity / trace tolerance for input files")->capture_default_str();
}

void add_dps_tolerances(CLI::App *sub, Options &o) {
    sub->add_option("--star-tol", o.star_tol, "star-product residual tolerance")->capture_default_str();
    sub->add_option("--spectrum-tol", o.spectrum_tol, "spectrum pattern tolerance")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Options o;
    o.args = args;
    std::function<Pending()> action;

    CLI::App app{"Analysis of depolarized pure states", "dpskit"};
    app.require_subcommand(1);
    app.fallthrough(false);

    auto seed_option = [&](CLI::App *sub, const char *desc) {
        return sub->add_option_function<std::uint64_t>(
            "--seed",
            [&](const std::uint64_t &s) {
                o.seed = s;
                o.seed_given = true;
            },
            desc);
    };

    auto *analyze = app.add_subcommand("analyze", "coherence vector, invariant ladder and DPS verdict");
    analyze->add_option("state", o.state, "state file")->required();
    add_state_tolerances(analyze, o);
    add_dps_tolerances(analyze, o);
    analyze->callback([&] { action = [&] { return cmd_analyze(o); }; });

    auto *distance = app.add_subcommand("distance", "fidelity, trace distance, Bures metric and angle");
    distance->add_option("a", o.state, "first state file")->required();
    distance->add_option("b", o.state_b, "second state file")->required();
    distance->add_option("--method", o.method, "closed | oracle | both")->capture_default_str();
    distance->add_option("--oracle-tol", o.oracle_tol, "closed-vs-oracle tolerance")->capture_default_str();
    add_state_tolerances(distance, o);
    add_dps_tolerances(distance, o);
    distance->callback([&] { action = [&] { return cmd_distance(o); }; });

    auto *ent = app.add_subcommand("entanglement", "partial transpose spectrum and negativity");
    ent->add_option("state", o.state, "state file")->required();
    ent->add_option("--dims", o.dims, "dA dB")->expected(2);
    ent->add_option("--neg-tol", o.neg_tol, "PT eigenvalues above -neg_tol count as zero")->capture_default_str();
    ent->add_option("--oracle-tol", o.oracle_tol, "closed-vs-brute-force tolerance")->capture_default_str();
    add_state_tolerances(ent, o);
    add_dps_tolerances(ent, o);
    ent->callback([&] { action = [&] { return cmd_entanglement(o); }; });

    auto *schmidt = app.add_subcommand("schmidt", "Schmidt data of a bipartite DPS");
    schmidt->add_option("state", o.state, "state file")->required();
    schmidt->add_option("--dims", o.dims, "dA dB")->expected(2);
    add_state_tolerances(schmidt, o);
    add_dps_tolerances(schmidt, o);
    schmidt->callback([&] { action = [&] { return cmd_schmidt(o); }; });

    auto *cons = app.add_subcommand("consistency", "can two marginals come from one DPS?");
    cons->add_option("rhoA", o.state, "marginal A (dA <= dB)")->required();
    cons->add_option("rhoB", o.state_b, "marginal B")->required();
    cons->add_option("--tol", o.consistency_tol, "spectral tolerance")->capture_default_str();
    add_state_tolerances(cons, o);
    cons->callback([&] { action = [&] { return cmd_consistency(o); }; });

    auto *iso = app.add_subcommand("isotropic", "isotropic state of fidelity F");
    iso->add_option("--dA", o.dA, "local dimension")->required();
    iso->add_option("--F", o.big_f, "fidelity with |Phi+>")->required();
    iso->add_option("--neg-tol", o.neg_tol, "negativity tolerance")->capture_default_str();
    iso->add_option("--out", o.out_path, "write the state here");
    iso->callback([&] { action = [&] { return cmd_isotropic(o); }; });

    auto *w2q = app.add_subcommand("werner2q", "two-qubit (p, Omega) canonical family");
    w2q->add_option("--p", o.p, "polarization")->required();
    w2q->add_option("--omega", o.omega, "Schmidt angle in [0, pi/2]")->required();
    w2q->add_option("--neg-tol", o.neg_tol, "negativity tolerance")->capture_default_str();
    w2q->add_option("--out", o.out_path, "write the state here");
    w2q->callback([&] { action = [&] { return cmd_werner2q(o); }; });

    auto *channel = app.add_subcommand("channel", "depolarizing maps and their realizations");
    channel->require_subcommand(1);

    auto *dep = channel->add_subcommand("depolarize", "(1-p) 1/D + p rho");
    dep->add_option("state", o.state, "state file")->required();
    dep->add_option("--p", o.p, "polarization")->required();
    dep->add_flag("--require-cp", o.require_cp, "fail outside the completely positive range");
    dep->add_option("--out", o.out_path, "write the state here");
    add_state_tolerances(dep, o);
    dep->callback([&] { action = [&] { return cmd_depolarize(o); }; });

    auto *p1 = channel->add_subcommand("protocol1", "two-ancilla realization of a PDPS");
    p1->add_option("state", o.state, "pure state file (or use --dim/--seed)");
    p1->add_option("--beta2", o.beta2, "|beta|^2 in [0, D^2/(D^2-1)]")->required();
    p1->add_option("--dim", o.dim, "dimension of a Haar-random input");
    seed_option(p1, "seed for the Haar-random input");
    p1->add_option("--out", o.out_path, "write the state here");
    add_state_tolerances(p1, o);
    p1->callback([&] { action = [&] { return cmd_protocol1(o); }; });

    auto *tw = channel->add_subcommand("twirl", "Clifford or Haar twirl of a channel");
    tw->add_option("channel", o.channel_file, "channel file {\"dim\", \"kraus\"}");
    tw->add_option("--shift-f", o.shift_f, "use the channel 'X with probability 1-f'");
    tw->add_option("--dim", o.dim, "dimension for --shift-f");
    tw->add_option("--mode", o.mode, "exact-clifford | clifford-no-identity | haar")->required();
    tw->add_option("--samples", o.samples, "Haar samples")->capture_default_str();
    seed_option(tw, "seed for Haar sampling");
    tw->add_option("--out", o.out_path, "write the twirled channel here");
    tw->callback([&] { action = [&] { return cmd_twirl(o); }; });

    auto *rec = channel->add_subcommand("recipe", "random-unitary recipe for a PDPS");
    rec->add_option("--psi", o.state, "pure state file (default: Haar-random from --seed)");
    rec->add_option("--dim", o.dim, "dimension when --psi is not given");
    rec->add_option("--f", o.f, "probability of doing nothing")->required();
    rec->add_option("--trials", o.trials, "number of trials")->capture_default_str();
    seed_option(rec, "seed");
    rec->add_option("--out", o.out_path, "write the state here");
    add_state_tolerances(rec, o);
    rec->callback([&] { action = [&] { return cmd_recipe(o); }; });

    auto *loc = channel->add_subcommand("local", "independent depolarization of both factors");
    loc->add_option("state", o.state, "state file")->required();
    loc->add_option("--dims", o.dims, "dA dB")->expected(2);
    loc->add_option("--pA", o.pA, "polarization on A")->required();
    loc->add_option("--pB", o.pB, "polarization on B")->required();
    loc->add_option("--out", o.out_path, "write the state here");
    add_state_tolerances(loc, o);
    add_dps_tolerances(loc, o);
    loc->callback([&] { action = [&] { return cmd_local(o); }; });

    auto *mom = app.add_subcommand("moments", "Tr(rho^m) exactly, by permutation or by swap-test sampling");
    mom->add_option("state", o.state, "state file")->required();
    mom->add_option("--m", o.moments_m, "moment orders")->capture_default_str();
    mom->add_option("--mode", o.mode, "exact | perm | mc")->required();
    mom->add_option("--shots", o.shots, "shots per moment (mc)")->capture_default_str();
    seed_option(mom, "seed (mc)");
    mom->add_flag("--assume-dps", o.assume_dps, "recover p from t2 and t3");
    mom->add_option("--fit-tol", o.fit_tol, "t3 fit tolerance")->capture_default_str();
    add_state_tolerances(mom, o);
    mom->callback([&] { action = [&] { return cmd_moments(o); }; });

    auto *fig = app.add_subcommand("fig1", "distance surfaces over (p, f) as CSV");
    fig->add_option("--dim", o.fig_dim, "dimension")->capture_default_str();
    fig->add_option("--grid", o.grid, "points per axis")->capture_default_str();
    fig->add_option("--out", o.out_path, "write the CSV here");
    fig->callback([&] { action = [&] { return cmd_fig1(o); }; });

    auto *gen = app.add_subcommand("gen", "write a state file");
    gen->require_subcommand(1);
    for (const char *kind : {"dps", "haar-pure", "mixture", "isotropic", "schmidt"}) {
        auto *g = gen->add_subcommand(kind, std::string("state file: ") + kind);
        g->add_option("--out", o.out_path, "write the state here instead of stdout");
        if (std::string(kind) == "isotropic") {
            g->add_option("--dA", o.dA, "local dimension")->required();
            g->add_option("--F", o.big_f, "fidelity with |Phi+>")->required();
        } else if (std::string(kind) == "schmidt") {
            g->add_option("--dims", o.dims, "dA dB")->expected(2)->required();
            g->add_option("--b", o.b_list, "Schmidt coefficients (normalized)")->required();
            g->add_option("--p", o.p, "polarization")->required();
            seed_option(g, "seed for random local unitaries (default: none)");
        } else {
            g->add_option("--dim", o.dim, "dimension")->required();
            g->add_option("--dims", o.dims, "optional dA dB")->expected(2);
            seed_option(g, "seed")->required();
            if (std::string(kind) == "dps") {
                g->add_option("--p", o.p, "polarization")->required();
            }
            if (std::string(kind) == "mixture") {
                g->add_option("--weight", o.weight, "weight of the first pure state")->capture_default_str();
            }
        }
        std::string k = kind;
        g->callback([&, k] { action = [&, k] { return cmd_gen(k, o); }; });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        Pending p = action();
        for (const auto &[path, content] : p.files) {
            io::write_file(path, content);
        }
        out << p.stdout_text;
        return kOk;
    } catch (const io::FormatError &e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error &e) {
        if (e.code() == ErrorCode::InequalityViolation) {
            err << "invariant violation: " << e.what() << "\n";
            return kInvariantViolation;
        }
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
}

}  // namespace dpskit::cli
