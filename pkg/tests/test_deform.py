import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from djcm import DeformationKind, ModelParams, eval_f, g_commutator, h_detuning, parse_deformation
from djcm.errors import MagnitudeOverflow, WeakCouplingWarning


def test_sin_values():
    assert eval_f(DeformationKind.sin(), 1) == pytest.approx(math.sin(1))
    assert g_commutator(DeformationKind.sin(), 0) == pytest.approx(math.sin(1) ** 2, abs=1e-15)


def test_identity_is_standard_jcm():
    n = np.arange(10)
    assert np.all(eval_f(DeformationKind.identity(), n) == 1.0)
    assert np.all(g_commutator(DeformationKind.identity(), n) == 1.0)


def test_zero_convention_for_singular_kinds():
    assert eval_f(DeformationKind.ln(), 0) == 0.0
    assert eval_f(DeformationKind.invsin(), 0) == 0.0
    assert eval_f(DeformationKind.ln(), 1) == 0.0


def test_detuning_example():
    p = ModelParams(deformation=DeformationKind.sin())
    assert h_detuning(p, 5) == pytest.approx(math.sin(5) ** 2)


def test_polynomial_and_parse_round_trip():
    k = parse_deformation("poly:1,0,0.5")
    assert eval_f(k, 2) == pytest.approx(3.0)
    assert parse_deformation(k.token) == k
    for name in ("identity", "sin", "invsin", "ln"):
        assert parse_deformation(name).token == name


@pytest.mark.parametrize("bad", ["cos", "poly:", "poly:a,b", ""])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_deformation(bad)


def test_magnitude_guard():
    with pytest.raises(MagnitudeOverflow):
        eval_f(DeformationKind.polynomial([0.0, 1e13]), 1)


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        eval_f(DeformationKind.sin(), -1)


@given(st.integers(0, 500))
def test_commutator_telescopes(n):
    # sum_{j<=n} g(j) = (n+1) f(n+1)^2
    for kind in (DeformationKind.sin(), DeformationKind.ln(), DeformationKind.identity()):
        total = np.sum(g_commutator(kind, np.arange(n + 1)))
        assert total == pytest.approx((n + 1) * eval_f(kind, n + 1) ** 2, rel=1e-9, abs=1e-9)


def test_params_validation_and_warning():
    with pytest.raises(ValueError):
        ModelParams(g=-1.0)
    ModelParams(g=0.0)
    with pytest.warns(WeakCouplingWarning):
        ModelParams(g=50.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ModelParams()


def test_params_dict_round_trip():
    p = ModelParams(g=0.3, beta=1 + 2j, deformation=parse_deformation("poly:0,1"))
    assert ModelParams.from_dict(p.to_dict()) == p
