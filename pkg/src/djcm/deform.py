"""Deformation functions f(n) and the quantities derived from them.

The deformed ladder operators are ``A = a f(n)`` and ``A^dag = f(n) a^dag``.
Everything downstream only needs f evaluated on non-negative integers, the
commutator function ``[A, A^dag] = (n+1) f(n+1)^2 - n f(n)^2`` and the
generalized detuning ``h(n) = Omega f(n)^2 + (w2 - w1)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import MagnitudeOverflow, WeakCouplingWarning

__all__ = [
    "DeformationKind",
    "ModelParams",
    "MAX_F_MAGNITUDE",
    "eval_f",
    "g_commutator",
    "h_detuning",
    "parse_deformation",
]

MAX_F_MAGNITUDE = 1e12

_NAMES = ("identity", "sin", "invsin", "ln", "poly")


@dataclass(frozen=True)
class DeformationKind:
    """A deformation function f(n) on the photon number.

    Use the module-level constructors (``DeformationKind.sin()`` etc.) or
    :func:`parse_deformation`. ``coeffs`` is only meaningful for ``poly`` and
    lists coefficients in ascending degree.
    """

    name: str
    coeffs: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.name not in _NAMES:
            raise ValueError(f"unknown deformation {self.name!r}")
        if self.name == "poly":
            if len(self.coeffs) == 0:
                raise ValueError("polynomial deformation needs at least one coefficient")
            coeffs = tuple(float(c) for c in self.coeffs)
            if not all(math.isfinite(c) for c in coeffs):
                raise ValueError("polynomial coefficients must be finite")
            object.__setattr__(self, "coeffs", coeffs)
        elif self.coeffs:
            raise ValueError(f"{self.name} deformation takes no coefficients")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def sin(cls):
        return cls("sin")

    @classmethod
    def invsin(cls):
        return cls("invsin")

    @classmethod
    def ln(cls):
        return cls("ln")

    @classmethod
    def polynomial(cls, coeffs):
        return cls("poly", tuple(coeffs))

    @property
    def token(self) -> str:
        """String form accepted by :func:`parse_deformation`."""
        if self.name == "poly":
            return "poly:" + ",".join(repr(c) for c in self.coeffs)
        return self.name

    def __str__(self):
        return self.token


def parse_deformation(token: str) -> DeformationKind:
    """Parse ``identity``, ``sin``, ``invsin``, ``ln`` or ``poly:c0,c1,...``."""
    tok = token.strip().lower()
    if tok.startswith("poly:"):
        body = tok[len("poly:"):]
        try:
            coeffs = [float(c) for c in body.split(",") if c.strip()]
        except ValueError as exc:
            raise ValueError(f"bad polynomial coefficients in {token!r}") from exc
        return DeformationKind.polynomial(coeffs)
    if tok in ("identity", "sin", "invsin", "ln"):
        return DeformationKind(tok)
    raise ValueError(f"unknown deformation {token!r}; expected identity, sin, invsin, ln or poly:c0,c1,...")


def eval_f(kind: DeformationKind, n):
    """Evaluate f(n) for a non-negative integer or an integer array.

    ``ln`` and ``invsin`` are undefined at n = 0 and take the value 0 there;
    f(0) only ever enters through the detuning, where it multiplies the
    vanishing deformed number operator.

    Raises
    ------
    MagnitudeOverflow
        if any |f(n)| exceeds ``MAX_F_MAGNITUDE``.
    """
    scalar = np.ndim(n) == 0
    n_arr = np.asarray(n)
    if n_arr.size and (np.any(n_arr < 0) or not np.all(np.equal(np.mod(n_arr, 1), 0))):
        raise ValueError("deformation is only defined on non-negative integers")
    x = n_arr.astype(float)

    if kind.name == "identity":
        out = np.ones_like(x)
    elif kind.name == "sin":
        out = np.sin(x)
    elif kind.name == "ln":
        out = np.log(np.where(x > 0, x, 1.0))
    elif kind.name == "invsin":
        s = np.sin(np.where(x > 0, x, 1.0))
        with np.errstate(divide="ignore"):
            out = np.where(x > 0, 1.0 / s, 0.0)
    else:
        out = np.polynomial.polynomial.polyval(x, kind.coeffs)

    bad = ~np.isfinite(out) | (np.abs(out) > MAX_F_MAGNITUDE)
    if np.any(bad):
        where = n_arr[bad] if n_arr.ndim else n_arr
        raise MagnitudeOverflow(
            f"|f(n)| exceeds {MAX_F_MAGNITUDE:g} for {kind.token} at n = {np.ravel(where)[0]}"
        )
    return float(out) if scalar else out


def g_commutator(kind: DeformationKind, n):
    """(n+1) f(n+1)^2 - n f(n)^2, the deformed commutator [A, A^dag] on |n>."""
    n_arr = np.asarray(n)
    out = (n_arr + 1) * eval_f(kind, n_arr + 1) ** 2 - n_arr * eval_f(kind, n_arr) ** 2
    return float(out) if np.ndim(n) == 0 else out


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the deformed atom-cavity model (hbar = 1).

    All quantities are dimensionless. ``beta`` is the amplitude of the initial
    coherent field.
    """

    g: float = 0.5
    omega: float = 1.0
    w1: float = 100.0
    w2: float = 100.0
    beta: complex = 2.0
    deformation: DeformationKind = field(default_factory=DeformationKind.sin)

    def __post_init__(self):
        for name in ("g", "omega", "w1", "w2"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, val)
        beta = complex(self.beta)
        if not (math.isfinite(beta.real) and math.isfinite(beta.imag)):
            raise ValueError("beta must be finite")
        object.__setattr__(self, "beta", beta)
        if isinstance(self.deformation, str):
            object.__setattr__(self, "deformation", parse_deformation(self.deformation))
        # g = 0 is allowed: it is the decoupled limit used to check propagators
        if self.g < 0:
            raise ValueError("coupling g must be non-negative")
        scale = min(abs(self.w1), abs(self.w2))
        if self.g > 0.1 * scale:
            warnings.warn(
                f"g = {self.g:g} is not small against w1, w2 = {self.w1:g}, {self.w2:g}; "
                "the rotating-wave approximation assumes weak coupling",
                WeakCouplingWarning,
                stacklevel=3,
            )

    @property
    def detuning(self) -> float:
        return self.w2 - self.w1

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "omega": self.omega,
            "w1": self.w1,
            "w2": self.w2,
            "beta": [self.beta.real, self.beta.imag],
            "deformation": self.deformation.token,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        beta = d["beta"]
        if isinstance(beta, (list, tuple)):
            beta = complex(beta[0], beta[1])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", WeakCouplingWarning)
            return cls(
                g=d["g"],
                omega=d["omega"],
                w1=d["w1"],
                w2=d["w2"],
                beta=beta,
                deformation=parse_deformation(d["deformation"]),
            )


def h_detuning(params: ModelParams, n):
    """Generalized detuning h(n) = Omega f(n)^2 + (w2 - w1)."""
    out = params.omega * eval_f(params.deformation, n) ** 2 + params.detuning
    return float(out) if np.ndim(n) == 0 else out
