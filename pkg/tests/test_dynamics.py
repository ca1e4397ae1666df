import math

import numpy as np
import pytest
from conftest import ALL_KINDS, fig1_params
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import poisson

from djcm import (
    DeformationKind,
    FieldState,
    ModelParams,
    amplitude_excited,
    amplitude_ground,
    evolve,
    manifold_frequencies,
    phi_stable,
    truncation_level,
)
from djcm.dynamics import initial_amplitude, tail_mass
from djcm.errors import TruncationTooLarge

RESONANT = ModelParams(g=1.0, omega=0.0, w1=100.0, w2=100.0, beta=1.0, deformation=DeformationKind.identity())


def test_resonant_vacuum_frequencies():
    fr = manifold_frequencies(RESONANT, 0)
    assert fr.h == 0.0 and fr.D == pytest.approx(2.0)
    assert fr.m1 == pytest.approx(1j) and fr.m2 == pytest.approx(-1j)


def test_resonant_half_cycle():
    t = math.pi / 2
    assert abs(amplitude_excited(RESONANT, 0, t)) < 1e-15
    assert abs(amplitude_ground(RESONANT, 0, t)) == pytest.approx(math.exp(-0.5), rel=1e-14)


def _phi_series(m1, m2, t, terms=40):
    # (e^{m1 t} - e^{m2 t})/(m1 - m2) = sum_k t^k (m1^k - m2^k)/(m1 - m2)/k!
    out = 0j
    for k in range(1, terms):
        out += t**k * sum(m1**j * m2 ** (k - 1 - j) for j in range(k)) / math.factorial(k)
    return out


@pytest.mark.parametrize(
    "m1,m2,t",
    [(1j, -1j, 0.7), (0.3j, 0.3j + 1e-9j, 2.0), (2.5j, 2.5j, 1.0), (1.1j, -0.2j, 3.0), (0.5j, 0.5j + 1e-5j, 1.5)],
)
def test_phi_matches_power_series(m1, m2, t):
    assert phi_stable(m1, m2, t) == pytest.approx(_phi_series(m1, m2, t), rel=1e-12, abs=1e-14)


def test_phi_degenerate_limit():
    assert phi_stable(0.4j, 0.4j, 2.0) == pytest.approx(2.0 * np.exp(0.8j), rel=1e-15)


def test_initial_amplitude_large_n_finite():
    a = initial_amplitude(3.0, np.arange(400))
    assert np.all(np.isfinite(a))
    assert np.sum(np.abs(a) ** 2) == pytest.approx(1.0, abs=1e-13)
    assert np.abs(a[4]) ** 2 == pytest.approx(poisson.pmf(4, 9.0), rel=1e-13)


def test_initial_amplitude_phase():
    beta = 1.5 * np.exp(0.4j)
    n = np.arange(6)
    ref = np.exp(-abs(beta) ** 2 / 2) * beta**n / np.sqrt([math.factorial(k) for k in n])
    assert np.allclose(initial_amplitude(beta, n), ref, rtol=1e-14, atol=0)


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(ALL_KINDS),
    st.floats(0, 20),
    st.floats(0, 3),
    st.floats(-3, 3),
)
def test_manifold_norm_is_conserved(kind, t, beta, omega):
    p = fig1_params(kind, beta=complex(beta), omega=omega)
    n = np.arange(40)
    w = np.abs(amplitude_excited(p, n, t)) ** 2 + np.abs(amplitude_ground(p, n, t)) ** 2
    assert np.allclose(w, poisson.pmf(n, beta**2), rtol=0, atol=1e-13)


def test_decoupled_manifold_when_f_vanishes():
    # ln(1) = 0 decouples manifold n=0
    p = fig1_params(DeformationKind.ln())
    assert amplitude_ground(p, 0, 3.0) == 0
    assert abs(amplitude_excited(p, 0, 3.0)) == pytest.approx(abs(initial_amplitude(2.0, 0)), rel=1e-14)


def test_truncation_rule():
    assert truncation_level(2.0) == 44
    assert truncation_level(0.0) == 20
    N = truncation_level(6.0, 1e-12)
    assert tail_mass(6.0, N) < 1e-12


def test_truncation_cap():
    with pytest.raises(TruncationTooLarge):
        evolve(fig1_params(beta=60.0), 1.0, max_levels=200)


def test_state_norm_and_json_round_trip():
    s = evolve(fig1_params(), 1.3)
    assert s.norm() + s.tail_mass == pytest.approx(1.0, abs=1e-14)
    back = FieldState.from_json(s.to_json())
    assert np.array_equal(back.excited, s.excited) and np.array_equal(back.ground, s.ground)
    assert back.params == s.params and back.t == s.t


def test_state_is_read_only():
    s = evolve(fig1_params(), 0.5)
    with pytest.raises(ValueError):
        s.excited[0] = 0


def test_branch_levels_layout():
    s = evolve(fig1_params(), 0.5)
    gnd, exc = s.branch_levels()
    assert gnd.size == exc.size == s.N + 1
    assert exc[0] == 0 and gnd[-1] == 0
    assert exc[1] == s.excited[0]


def test_n_levels_raises_truncation():
    assert evolve(fig1_params(), 0.0, n_levels=60).N == 60


def test_phi_examples():
    assert phi_stable(0, 0, 3.0) == 3.0
    assert phi_stable(1j, -1j, np.pi / 2) == pytest.approx(1.0, abs=1e-15)
    # (e^{2i} - e^{i}) / i; the listed reference value 0.4913 - 0.7557i does not satisfy this
    ref = (np.exp(2j) - np.exp(1j)) / 1j
    assert phi_stable(2j, 1j, 1.0) == pytest.approx(ref, abs=1e-15)
    assert ref == pytest.approx(0.0678264 + 0.9564491j, abs=1e-6)


def test_phi_continuous_across_switch():
    m1 = 0.8j
    for t in (0.5, 2.0):
        dm = 1e-6 / t
        below = phi_stable(m1, m1 + dm * (1 - 1e-9) * 1j, t)
        above = phi_stable(m1, m1 + dm * (1 + 1e-9) * 1j, t)
        assert abs(below - above) < 1e-12


def test_vacuum_input_single_manifold():
    p = fig1_params(beta=0.0)
    s = evolve(p, 5.0)
    assert s.excited[0] == amplitude_excited(p, 0, 5.0)
    assert np.all(s.excited[1:] == 0) and np.all(s.ground[1:] == 0)
