import warnings

import numpy as np
import pytest

from djcm import DeformationKind, ModelParams
from djcm.errors import WeakCouplingWarning

ALL_KINDS = (
    DeformationKind.identity(),
    DeformationKind.sin(),
    DeformationKind.invsin(),
    DeformationKind.ln(),
)


def fig1_params(kind=None, **changes):
    """g=0.5, beta=2, Omega=1, w1=w2=100 with the requested deformation."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WeakCouplingWarning)
        p = ModelParams(g=0.5, omega=1.0, w1=100.0, w2=100.0, beta=2.0, deformation=kind or DeformationKind.sin())
        return p.replace(**changes) if changes else p


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_log(request):
    log = request.config.__dict__.setdefault("_djcm_acceptance", [])

    def record(label, ok, detail):
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}"
        log.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_djcm_acceptance", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
