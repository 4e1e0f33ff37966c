# Copyright 2026 The dpskit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import numpy as np
import pytest

import dpskit


def trace_distance(a, b):
    return 0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum()


def test_closed_forms_match_numpy():
    for d in (2, 3, 5):
        psi = dpskit.haar_state(d, 1)
        phi = dpskit.haar_state(d, 2)
        rho = dpskit.dps_density(psi, 0.4)
        sigma = dpskit.dps_density(phi, -0.1)
        assert dpskit.trace_distance_closed(psi, 0.4, phi, -0.1) == pytest.approx(trace_distance(rho, sigma), abs=1e-10)
        assert dpskit.fidelity_closed(psi, 0.4, phi, -0.1) == pytest.approx(
            dpskit.fidelity_oracle(rho, sigma), abs=1e-10)


def test_dps_test_signed():
    psi = dpskit.haar_state(4, 3)
    assert dpskit.dps_test(dpskit.dps_density(psi, -0.2)) == pytest.approx(-0.2, abs=1e-9)
    assert dpskit.dps_test(dpskit.random_density(4, 5)) is None


def test_negativity_fixed_point():
    s = 1 / np.sqrt(2)
    r = dpskit.negativity(1 / 3, [s, s, 0.0], 3, 3)
    assert r["negativity"] == pytest.approx(5 / 54, abs=1e-12)
    assert r["negative_count"] == 1


def test_protocol1_matches_depolarizing():
    psi = dpskit.haar_state(3, 7)
    out = dpskit.protocol1(psi, 0.5)
    want = 0.5 * np.outer(psi, psi.conj()) + 0.5 * np.eye(3) / 3
    assert np.abs(out - want).max() < 1e-12


def test_twirl_of_shift():
    x = np.roll(np.eye(2), 1, axis=0)
    kraus = [np.sqrt(0.7) * np.eye(2, dtype=complex), np.sqrt(0.3) * x.astype(complex)]
    t = dpskit.twirl(kraus, "exact-clifford")
    assert t["p_hat"] == pytest.approx((4 * 0.7 - 1) / 3, abs=1e-12)


def test_moments_and_fit():
    rho = dpskit.dps_density(dpskit.haar_state(3, 9), -0.3)
    t2 = dpskit.moment_permutation(rho, 2)
    t3 = dpskit.moment_permutation(rho, 3)
    assert t2 == pytest.approx(np.trace(rho @ rho).real, abs=1e-12)
    p, resolved = dpskit.dps_p_from_moments(t2, t3, 3)
    assert p == pytest.approx(-0.3, abs=1e-7)
    assert resolved


def test_errors_carry_codes():
    with pytest.raises(dpskit.DpskitError) as info:
        dpskit.dps_density(dpskit.haar_state(3, 1), -0.9)
    assert info.value.code == "PolarizationOutOfRange"


def test_cli_from_python():
    code, out, err = dpskit.cli(["isotropic", "--dA", "2", "--F", "0.75"])
    assert code == 0, err
    report = json.loads(out)
    assert report["results"]["p"] == pytest.approx(2 / 3, abs=1e-14)
    code, out, err = dpskit.cli(["isotropic", "--dA", "2", "--F", "2"])
    assert code == 3 and out == ""
