"""Brute-force RK4 propagator for the manifold equations of motion.

Integrates, for every manifold n,

    dC2/dt =  k e^{+i h t} C1
    dC1/dt = -k e^{-i h t} C2,      k = g f(n+1) sqrt(n+1), h = h(n),

from C2(0) = exp(-|beta|^2/2) beta^n / sqrt(n!), C1(0) = 0. This pair is the
one whose exact solution is the closed form in :mod:`djcm.dynamics`; the
coupling factor g f(n+1) and the relative minus sign are both needed for
that (and for the norm to be conserved). The propagator shares no code with
the closed form beyond the deformation functions, so it serves as an
independent check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._fmt import fmt
from .deform import ModelParams, eval_f, h_detuning
from .dynamics import (
    DEFAULT_EPS_TRUNC,
    MAX_LEVELS,
    FieldState,
    _resolve_levels,
    tail_mass,
)
from .errors import StepTooLarge

__all__ = [
    "MAX_STEP_RATE",
    "OdeSettings",
    "Trajectory",
    "propagate_levels",
    "propagate_manifold",
    "propagate_state",
    "trajectory_csv",
]

# dt * (|k| + |h|) above this is rejected
MAX_STEP_RATE = 0.1


@dataclass(frozen=True)
class OdeSettings:
    t_end: float
    dt: float = 1e-4
    method: str = "rk4"

    def __post_init__(self):
        if self.method != "rk4":
            raise ValueError("only fixed-step rk4 is supported")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_end >= 0:
            raise ValueError("t_end must be non-negative")
        if self.t_end > 0 and self.dt > self.t_end:
            raise ValueError("dt must not exceed t_end")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass(frozen=True)
class Trajectory:
    """Sampled amplitudes; rows of ``c2``/``c1`` follow ``t``."""

    t: np.ndarray
    c2: np.ndarray
    c1: np.ndarray


def _manifold_constants(params, n):
    n = np.asarray(n)
    C0 = _coherent_amplitude(params.beta, n)
    kappa = params.g * eval_f(params.deformation, n + 1) * np.sqrt(n + 1.0)
    h = h_detuning(params, n)
    return C0, np.asarray(kappa, dtype=float), np.asarray(h, dtype=float)


def _coherent_amplitude(beta, n):
    # independent of dynamics.initial_amplitude: running product beta/sqrt(j)
    n = np.atleast_1d(np.asarray(n))
    out = np.empty(n.shape, dtype=complex)
    top = int(n.max()) if n.size else 0
    table = np.empty(top + 1, dtype=complex)
    table[0] = math.exp(-0.5 * abs(beta) ** 2)
    for j in range(1, top + 1):
        table[j] = table[j - 1] * beta / math.sqrt(j)
    out[...] = table[n]
    return out


def _rk4(C0, kappa, h, dt, n_steps, substeps, sample_every):
    """Integrate a batch of manifolds; returns samples at every ``sample_every`` outer steps."""
    c2 = np.array(C0, dtype=complex)
    exp = np.exp
    if c2.size == 1:
        # python scalars are far cheaper than 1-element arrays in this loop
        c2, kappa, h, exp = complex(c2[0]), float(kappa[0]), float(h[0]), cmath.exp
    c1 = 0 * c2
    ih = 1j * h
    step = dt / substeps
    half = 0.5 * step
    n_samples = n_steps // sample_every + 1
    out2 = np.empty((n_samples, np.size(c2)), dtype=complex)
    out1 = np.empty_like(out2)
    out2[0], out1[0] = c2, c1
    k = 0
    for i in range(n_steps):
        for j in range(substeps):
            t0 = i * dt + j * step
            e0 = exp(ih * t0)
            em = exp(ih * (t0 + half))
            e1 = exp(ih * (t0 + step))
            a2 = kappa * e0 * c1
            a1 = -kappa * c2 / e0
            b2 = kappa * em * (c1 + half * a1)
            b1 = -kappa * (c2 + half * a2) / em
            d2 = kappa * em * (c1 + half * b1)
            d1 = -kappa * (c2 + half * b2) / em
            f2 = kappa * e1 * (c1 + step * d1)
            f1 = -kappa * (c2 + step * d2) / e1
            c2 = c2 + step / 6.0 * (a2 + 2.0 * b2 + 2.0 * d2 + f2)
            c1 = c1 + step / 6.0 * (a1 + 2.0 * b1 + 2.0 * d1 + f1)
        if (i + 1) % sample_every == 0:
            k += 1
            out2[k], out1[k] = c2, c1
    return out2, out1


def _check_rate(kappa, h, dt, n):
    rate = dt * (np.abs(kappa) + np.abs(h))
    bad = rate > MAX_STEP_RATE
    if np.any(bad):
        i = int(np.flatnonzero(np.atleast_1d(bad))[0])
        raise StepTooLarge(
            f"dt = {dt:g} too coarse for manifold n = {np.atleast_1d(n)[i]}: "
            f"dt*(|k|+|h|) = {np.atleast_1d(rate)[i]:.3g} > {MAX_STEP_RATE}"
        )


def propagate_manifold(
    params: ModelParams, n: int, settings: OdeSettings, sample_every: int = 1
) -> Trajectory:
    """RK4 trajectory of manifold ``n`` sampled every ``sample_every`` steps.

    Raises
    ------
    StepTooLarge
        if ``dt * (|k| + |h|) > 0.1`` for this manifold.
    """
    C0, kappa, h = _manifold_constants(params, [n])
    _check_rate(kappa, h, settings.dt, [n])
    n_steps = settings.n_steps
    sample_every = max(1, min(sample_every, n_steps or 1))
    c2, c1 = _rk4(C0, kappa, h, settings.dt, n_steps, 1, sample_every)
    t = np.arange(c2.shape[0]) * settings.dt * sample_every
    return Trajectory(t=t, c2=c2[:, 0], c1=c1[:, 0])


def propagate_levels(
    params: ModelParams,
    n,
    settings: OdeSettings,
    *,
    sample_every: int | None = None,
    refine: bool = True,
) -> Trajectory:
    """RK4 for several manifolds at once; ``c2``/``c1`` have shape (samples, len(n)).

    With ``refine`` a manifold whose rate trips the step guard is integrated
    with ``dt`` split into equal substeps; samples stay on the ``dt`` grid.
    Without it such a manifold raises :class:`StepTooLarge`.
    """
    n = np.atleast_1d(np.asarray(n))
    C0, kappa, h = _manifold_constants(params, n)
    dt = settings.dt
    n_steps = settings.n_steps
    if sample_every is None:
        sample_every = max(n_steps, 1)
    sample_every = max(1, min(sample_every, n_steps or 1))
    rate = dt * (np.abs(kappa) + np.abs(h))
    if not refine:
        _check_rate(kappa, h, dt, n)
    substeps = np.maximum(1, np.ceil(rate / MAX_STEP_RATE)).astype(int)

    n_samples = n_steps // sample_every + 1
    c2 = np.empty((n_samples, n.size), dtype=complex)
    c1 = np.empty_like(c2)
    for s in np.unique(substeps):
        idx = np.flatnonzero(substeps == s)
        a, b = _rk4(C0[idx], kappa[idx], h[idx], dt, n_steps, int(s), sample_every)
        c2[:, idx], c1[:, idx] = a, b
    t = np.arange(n_samples) * dt * sample_every
    return Trajectory(t=t, c2=c2, c1=c1)


def propagate_state(
    params: ModelParams,
    settings: OdeSettings,
    eps_trunc: float = DEFAULT_EPS_TRUNC,
    *,
    n_levels: int | None = None,
    max_levels: int = MAX_LEVELS,
    refine: bool = True,
) -> FieldState:
    """Field state at ``settings.t_end`` built from RK4 manifolds.

    Same layout and truncation as :func:`djcm.dynamics.evolve`.
    """
    N = _resolve_levels(params, eps_trunc, n_levels, max_levels)
    traj = propagate_levels(params, np.arange(N), settings, refine=refine)
    return FieldState(
        t=settings.n_steps * settings.dt,
        params=params,
        excited=traj.c2[-1],
        ground=traj.c1[-1],
        tail_mass=tail_mass(abs(params.beta), N),
    )


def trajectory_csv(traj: Trajectory) -> str:
    """CSV text with columns ``t,re_c2,im_c2,re_c1,im_c1``."""
    lines = ["t,re_c2,im_c2,re_c1,im_c1"]
    for t, a, b in zip(traj.t, np.ravel(traj.c2), np.ravel(traj.c1)):
        lines.append(",".join(fmt(v) for v in (t, a.real, a.imag, b.real, b.imag)))
    return "\n".join(lines) + "\n"
