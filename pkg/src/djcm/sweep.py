"""Parameter sweeps producing figure-ready tables of witnesses."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from ._fmt import fmt
from ._parallel import ordered_map
from .deform import DeformationKind, ModelParams, parse_deformation
from .dynamics import DEFAULT_EPS_TRUNC, evolve
from .errors import DJCMError, WeakCouplingWarning
from .moments import antibunching_d1, mandel_q, photon_number_dist, squeezing
from .oracle import OdeSettings, propagate_state
from .phasespace import husimi_q, wigner

__all__ = [
    "AXES",
    "WITNESSES",
    "SweepSpec",
    "SweepTable",
    "default_figure_specs",
    "figure_panels",
    "run_sweep",
]

AXES = ("time", "beta_mag", "beta_complex_grid", "omega_field", "photon_index")
WITNESSES = ("pnd", "mandel", "d1", "squeeze", "wigner", "husimi")

_COLUMNS = {
    "pnd": ("p_n",),
    "mandel": ("q_mandel",),
    "d1": ("d1",),
    "squeeze": ("s_x", "s_p"),
    "wigner": ("wigner",),
    "husimi": ("husimi",),
}

FIGURE_KINDS = (DeformationKind.sin(), DeformationKind.invsin(), DeformationKind.ln())


@dataclass(frozen=True)
class SweepSpec:
    """One sweep axis over fixed parameters, for one or more deformations.

    ``n`` is the manifold index used by the ``pnd`` witness and ``point`` the
    phase-space point used by ``wigner``/``husimi`` on scalar axes. On the
    ``beta_complex_grid`` axis ``start``/``stop``/``count`` apply to both the
    real and the imaginary part of beta.
    """

    axis: str
    start: float
    stop: float
    count: int
    witnesses: tuple[str, ...]
    params: ModelParams = field(default_factory=ModelParams)
    t: float = 1.0
    n: int = 5
    point: complex = 1.0
    deformations: tuple[DeformationKind, ...] = FIGURE_KINDS
    eps_trunc: float = DEFAULT_EPS_TRUNC
    engine: str = "closed-form"
    dt: float = 1e-4

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}; expected one of {AXES}")
        if self.count < 2:
            raise ValueError("sweep needs count >= 2")
        if not self.start < self.stop:
            raise ValueError("sweep needs start < stop")
        bad = [w for w in self.witnesses if w not in WITNESSES]
        if bad or not self.witnesses:
            raise ValueError(f"witnesses must be a non-empty subset of {WITNESSES}")
        if self.engine not in ("closed-form", "oracle"):
            raise ValueError("engine must be 'closed-form' or 'oracle'")
        if self.axis == "photon_index":
            nodes = self.nodes()
            if np.any(nodes != np.round(nodes)) or nodes[0] < 0:
                raise ValueError("photon_index sweeps need non-negative integer nodes")
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        object.__setattr__(
            self,
            "deformations",
            tuple(parse_deformation(d) if isinstance(d, str) else d for d in self.deformations),
        )
        object.__setattr__(self, "point", complex(self.point))

    def nodes(self) -> np.ndarray:
        if self.axis == "beta_complex_grid":
            v = np.linspace(self.start, self.stop, self.count)
            return (v[None, :] + 1j * v[:, None]).ravel()
        return np.linspace(self.start, self.stop, self.count)

    @property
    def axis_columns(self) -> tuple[str, ...]:
        if self.axis == "beta_complex_grid":
            return ("beta_re", "beta_im")
        return (self.axis,)

    @property
    def columns(self) -> tuple[str, ...]:
        cols = self.axis_columns + ("kind",)
        for w in self.witnesses:
            cols += _COLUMNS[w]
        return cols + ("status",)

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "start": self.start,
            "stop": self.stop,
            "count": self.count,
            "witnesses": list(self.witnesses),
            "params": self.params.to_dict(),
            "t": self.t,
            "n": self.n,
            "point": [self.point.real, self.point.imag],
            "deformations": [d.token for d in self.deformations],
            "eps_trunc": self.eps_trunc,
            "engine": self.engine,
            "dt": self.dt,
        }


@dataclass(frozen=True)
class SweepTable:
    spec: SweepSpec
    columns: tuple[str, ...]
    rows: list

    def column(self, name: str, kind: str | None = None) -> np.ndarray:
        i = self.columns.index(name)
        k = self.columns.index("kind")
        return np.array([r[i] for r in self.rows if kind is None or r[k] == kind])

    def to_csv(self) -> str:
        lines = ["# spec: " + json.dumps(self.spec.to_dict(), sort_keys=True), ",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        records = [
            {c: (v if isinstance(v, str) or math.isfinite(v) else None) for c, v in zip(self.columns, row)}
            for row in self.rows
        ]
        return json.dumps({"spec": self.spec.to_dict(), "columns": list(self.columns), "rows": records}, indent=1)


def _node_params(spec: SweepSpec, kind: DeformationKind, x):
    params = replace(spec.params, deformation=kind)
    t, n = spec.t, spec.n
    if spec.axis == "time":
        t = float(x)
    elif spec.axis in ("beta_mag", "beta_complex_grid"):
        params = replace(params, beta=complex(x))
    elif spec.axis == "omega_field":
        params = replace(params, omega=float(x))
    else:
        n = int(round(float(x)))
    return params, t, n


def _state(spec, params, t, n_levels):
    if spec.engine == "oracle":
        return propagate_state(params, OdeSettings(t_end=t, dt=spec.dt), spec.eps_trunc, n_levels=n_levels)
    return evolve(params, t, spec.eps_trunc, n_levels=n_levels)


def evaluate_node(spec: SweepSpec, kind: DeformationKind, x) -> tuple:
    """Witness values for one sweep node, in ``spec.columns`` order."""
    axis_vals = (float(np.real(x)), float(np.imag(x))) if spec.axis == "beta_complex_grid" else (float(x),)
    n_vals = sum(len(_COLUMNS[w]) for w in spec.witnesses)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WeakCouplingWarning)
            params, t, n = _node_params(spec, kind, x)
        need = n + 1 if "pnd" in spec.witnesses else None
        state = _state(spec, params, t, need)
        vals = []
        for w in spec.witnesses:
            if w == "pnd":
                vals.append(photon_number_dist(state, n))
            elif w == "mandel":
                vals.append(mandel_q(state))
            elif w == "d1":
                vals.append(antibunching_d1(state))
            elif w == "squeeze":
                vals.extend(squeezing(state))
            elif w == "wigner":
                vals.append(wigner(state, spec.point))
            else:
                vals.append(husimi_q(state, spec.point))
        status = "ok"
    except DJCMError as exc:
        vals = [math.nan] * n_vals
        status = type(exc).__name__
    return axis_vals + (kind.token,) + tuple(vals) + (status,)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepTable:
    """Evaluate every (deformation, node) pair; rows are grouped by deformation in spec order, then by node.

    A node whose evaluation fails keeps its row, with NaN values and the
    exception name in the ``status`` column.
    """
    nodes = spec.nodes()
    jobs = [(kind, x) for kind in spec.deformations for x in nodes]
    rows = ordered_map(lambda job: evaluate_node(spec, *job), jobs, workers)
    return SweepTable(spec=spec, columns=spec.columns, rows=rows)


# axis ranges for the figure panels (chosen here, not given upstream)
_RANGES = {
    "time": (0.0, 10.0, 201),
    "beta_mag": (0.1, 4.0, 101),
    "omega_field": (0.1, 5.0, 101),
    "photon_index": (0.0, 15.0, 16),
    "beta_complex_grid": (-3.0, 3.0, 41),
}


def _figure_spec(axis, witnesses):
    start, stop, count = _RANGES[axis]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WeakCouplingWarning)
        params = ModelParams(g=0.5, omega=1.0, w1=100.0, w2=100.0, beta=2.0, deformation=DeformationKind.sin())
    return SweepSpec(axis=axis, start=start, stop=stop, count=count, witnesses=witnesses, params=params, t=1.0, n=5)


def figure_panels() -> dict[str, SweepSpec]:
    """Every swept panel of the six figures, keyed like ``fig2b``."""
    panels = {}
    for fig, wit in (("fig1", ("pnd",)), ("fig2", ("mandel",)), ("fig4", ("d1",)), ("fig5", ("squeeze",))):
        for letter, axis in zip("abcd", ("time", "beta_mag", "omega_field", "photon_index")):
            if axis == "photon_index" and fig != "fig1":
                continue
            panels[fig + letter] = _figure_spec(axis, wit)
    panels["fig3a"] = _figure_spec("beta_complex_grid", ("wigner",))
    panels["fig3g"] = _figure_spec("time", ("wigner",))
    panels["fig6a"] = _figure_spec("beta_complex_grid", ("husimi",))
    panels["fig6g"] = _figure_spec("time", ("husimi",))
    panels["fig6h"] = _figure_spec("omega_field", ("husimi",))
    return dict(sorted(panels.items()))


def default_figure_specs() -> list[SweepSpec]:
    """The leading panel of each of the six figures, in figure order."""
    panels = figure_panels()
    return [panels[k] for k in ("fig1a", "fig2a", "fig3a", "fig4a", "fig5a", "fig6a")]
