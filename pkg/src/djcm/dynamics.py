"""Closed-form evolution of the deformed Jaynes-Cummings model.

The atom starts in its excited state and the field in a coherent state
``|beta>``. The dynamics splits into independent two-level manifolds labelled
by n: the excited-atom amplitude ``C2[n]`` sits on Fock level n+1 and the
ground-atom amplitude ``C1[n]`` on level n. Both carry the Poisson weight of
``n`` photons in ``|beta>``.

All amplitude functions broadcast ``n`` against ``t`` with numpy rules, so
``amplitude_excited(p, n[:, None], t[None, :])`` gives a manifold-by-time
table.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, pdtrc

from .deform import ModelParams, eval_f, h_detuning
from .errors import TruncationTooLarge

__all__ = [
    "DEFAULT_EPS_TRUNC",
    "MAX_LEVELS",
    "FieldState",
    "ManifoldFrequencies",
    "amplitude_excited",
    "amplitude_ground",
    "coherent_weights",
    "coupling",
    "evolve",
    "initial_amplitude",
    "manifold_frequencies",
    "phi_stable",
    "truncation_level",
]

DEFAULT_EPS_TRUNC = 1e-12
MAX_LEVELS = 4096

# below this |m1 - m2| |t| the divided difference switches to its Taylor series
_SERIES_SWITCH = 1e-6


@dataclass(frozen=True)
class ManifoldFrequencies:
    """Eigenfrequencies of manifold n: ``2 m_{1,2} = i h +- i D``."""

    h: np.ndarray | float
    D: np.ndarray | float
    m1: np.ndarray | complex
    m2: np.ndarray | complex


def coupling(params: ModelParams, n):
    """Matrix element g f(n+1) sqrt(n+1) linking |2, n+1> and |1, n>."""
    n_arr = np.asarray(n)
    out = params.g * eval_f(params.deformation, n_arr + 1) * np.sqrt(n_arr + 1.0)
    return float(out) if np.ndim(n) == 0 else out


def manifold_frequencies(params: ModelParams, n) -> ManifoldFrequencies:
    h = h_detuning(params, n)
    kappa = coupling(params, n)
    D = np.sqrt(4.0 * kappa**2 + np.square(h))
    m1 = 0.5j * (h + D)
    m2 = 0.5j * (h - D)
    if np.ndim(n) == 0:
        return ManifoldFrequencies(float(h), float(D), complex(m1), complex(m2))
    return ManifoldFrequencies(h, D, m1, m2)


def _sinhc(z):
    """sinh(z)/z, continuous through z = 0."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-4
    zs = np.where(small, 1.0, z)
    z2 = z * z
    return np.where(small, 1.0 + z2 / 6.0 + z2 * z2 / 120.0, np.sinh(zs) / zs)


def phi_stable(m1, m2, t):
    """Divided difference (exp(m1 t) - exp(m2 t)) / (m1 - m2).

    Evaluated as ``t exp(s t) sinh(w t) / (w t)`` with ``s``, ``w`` the half
    sum and half difference of the rates, which has no cancellation. For
    ``|m1 - m2| |t| <= 1e-6`` the second-order Taylor series about ``m1`` is
    used instead; both branches agree to rounding there.
    """
    m1 = np.asarray(m1, dtype=complex)
    m2 = np.asarray(m2, dtype=complex)
    t = np.asarray(t, dtype=float)
    s = 0.5 * (m1 + m2)
    w = 0.5 * (m1 - m2)
    dm = m2 - m1
    exact = t * np.exp(s * t) * _sinhc(w * t)
    series = t * np.exp(m1 * t) * (1.0 + dm * t / 2.0 + (dm * t) ** 2 / 6.0)
    out = np.where(np.abs(dm) * np.abs(t) > _SERIES_SWITCH, exact, series)
    return complex(out) if out.ndim == 0 else out


def initial_amplitude(beta: complex, n):
    """Coherent-state amplitude exp(-|beta|^2/2) beta^n / sqrt(n!).

    Evaluated through its logarithm so it stays finite past n = 170.
    """
    n_arr = np.asarray(n)
    beta = complex(beta)
    r = abs(beta)
    if r == 0.0:
        out = np.where(n_arr == 0, 1.0 + 0j, 0j)
    else:
        logmag = -0.5 * r * r + n_arr * math.log(r) - 0.5 * gammaln(n_arr + 1.0)
        out = np.exp(logmag) * np.exp(1j * n_arr * math.atan2(beta.imag, beta.real))
    return complex(out) if np.ndim(n) == 0 else out


def coherent_weights(beta_mag: float, n):
    """Poisson weights exp(-|beta|^2) |beta|^(2n) / n!."""
    return np.abs(initial_amplitude(beta_mag, n)) ** 2


def amplitude_excited(params: ModelParams, n, t):
    """C2[n](t): excited atom, field on Fock level n+1."""
    fr = manifold_frequencies(params, n)
    t = np.asarray(t, dtype=float)
    s = 0.5 * (np.asarray(fr.m1) + np.asarray(fr.m2))
    w = 0.5 * (np.asarray(fr.m1) - np.asarray(fr.m2))
    # (m2 e^{m1 t} - m1 e^{m2 t}) / (m2 - m1) = e^{st} cosh(wt) - s phi
    shape = np.exp(s * t) * np.cosh(w * t) - s * phi_stable(fr.m1, fr.m2, t)
    out = initial_amplitude(params.beta, n) * shape
    return complex(out) if np.ndim(out) == 0 else out


def amplitude_ground(params: ModelParams, n, t):
    """C1[n](t): ground atom, field on Fock level n.

    Uses m1 m2 = g^2 (n+1) f(n+1)^2 to cancel the factor that would divide by
    zero whenever f(n+1) = 0; the manifold is then decoupled and C1 stays 0.
    """
    fr = manifold_frequencies(params, n)
    t = np.asarray(t, dtype=float)
    kappa = coupling(params, n)
    out = (
        -np.exp(-1j * np.asarray(fr.h) * t)
        * kappa
        * initial_amplitude(params.beta, n)
        * phi_stable(fr.m1, fr.m2, t)
    )
    return complex(out) if np.ndim(out) == 0 else out


def truncation_level(beta_mag: float, eps_trunc: float = DEFAULT_EPS_TRUNC) -> int:
    """Number of manifolds N to keep for a coherent input of modulus ``beta_mag``.

    Smallest N whose neglected Poisson tail is below ``eps_trunc``, but never
    below ``max(20, ceil(|beta|^2 + 10 |beta| + 20))``.
    """
    if beta_mag < 0:
        raise ValueError("beta_mag must be non-negative")
    if not 0 < eps_trunc < 1:
        raise ValueError("eps_trunc must lie in (0, 1)")
    lam = beta_mag * beta_mag
    n = max(20, math.ceil(lam + 10 * beta_mag + 20))
    while lam > 0 and pdtrc(n - 1, lam) >= eps_trunc:
        n += max(1, int(math.sqrt(lam)))
    return int(n)


@dataclass(frozen=True, eq=False)
class FieldState:
    """Truncated field amplitudes at time t.

    ``excited[n]`` is C2[n] on Fock level n+1 and ``ground[n]`` is C1[n] on
    level n, for n < N. The reduced field density matrix is
    ``|E><E| + |G><G|`` with E, G those two branch vectors.
    """

    t: float
    params: ModelParams
    excited: np.ndarray
    ground: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        exc = np.array(self.excited, dtype=complex)
        gnd = np.array(self.ground, dtype=complex)
        if exc.ndim != 1 or exc.shape != gnd.shape or exc.size < 1:
            raise ValueError("excited and ground must be 1-d arrays of equal nonzero length")
        exc.setflags(write=False)
        gnd.setflags(write=False)
        object.__setattr__(self, "excited", exc)
        object.__setattr__(self, "ground", gnd)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "tail_mass", float(self.tail_mass))

    @property
    def N(self) -> int:
        return self.excited.size

    def branch_levels(self):
        """Ground and excited branch vectors on Fock levels 0..N (length N+1)."""
        gnd = np.zeros(self.N + 1, dtype=complex)
        exc = np.zeros(self.N + 1, dtype=complex)
        gnd[:-1] = self.ground
        exc[1:] = self.excited
        return gnd, exc

    def norm(self) -> float:
        return float(np.sum(np.abs(self.excited) ** 2) + np.sum(np.abs(self.ground) ** 2))

    def to_json(self) -> str:
        doc = {
            "t": self.t,
            "N": self.N,
            "tail_mass": self.tail_mass,
            "params": self.params.to_dict(),
            "excited": [[z.real, z.imag] for z in self.excited.tolist()],
            "ground": [[z.real, z.imag] for z in self.ground.tolist()],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "FieldState":
        doc = json.loads(text)
        exc = [complex(re, im) for re, im in doc["excited"]]
        gnd = [complex(re, im) for re, im in doc["ground"]]
        if len(exc) != doc["N"]:
            raise ValueError("N does not match amplitude count")
        return cls(
            t=doc["t"],
            params=ModelParams.from_dict(doc["params"]),
            excited=np.array(exc),
            ground=np.array(gnd),
            tail_mass=doc["tail_mass"],
        )


def _resolve_levels(params, eps_trunc, n_levels, max_levels):
    if not 0 < eps_trunc < 1:
        raise ValueError("eps_trunc must lie in (0, 1)")
    N = truncation_level(abs(params.beta), eps_trunc)
    if n_levels is not None:
        N = max(N, int(n_levels))
    if N > max_levels:
        raise TruncationTooLarge(f"truncation needs {N} levels, cap is {max_levels}")
    return N


def tail_mass(beta_mag: float, N: int) -> float:
    """Poisson mass of manifolds n >= N."""
    lam = beta_mag * beta_mag
    return float(pdtrc(N - 1, lam)) if lam > 0 else 0.0


def evolve(
    params: ModelParams,
    t: float,
    eps_trunc: float = DEFAULT_EPS_TRUNC,
    *,
    n_levels: int | None = None,
    max_levels: int = MAX_LEVELS,
) -> FieldState:
    """Field state at time ``t`` from the closed-form amplitudes.

    ``n_levels`` raises the truncation above what ``eps_trunc`` requires.
    """
    N = _resolve_levels(params, eps_trunc, n_levels, max_levels)
    n = np.arange(N)
    return FieldState(
        t=t,
        params=params,
        excited=amplitude_excited(params, n, t),
        ground=amplitude_ground(params, n, t),
        tail_mass=tail_mass(abs(params.beta), N),
    )
