"""Normally ordered moments of the reduced field and the scalar witnesses."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields

import numpy as np

from ._fmt import fmt
from .dynamics import FieldState
from .errors import IndexOrderTooHigh, OutOfRange, VacuumState

__all__ = [
    "MAX_MOMENT_ORDER",
    "WitnessRecord",
    "antibunching_d1",
    "level_occupation",
    "mandel_q",
    "moment",
    "photon_number_dist",
    "squeezing",
    "witness_record",
    "witness_csv",
]

MAX_MOMENT_ORDER = 4

# diagonal moments are real; a larger imaginary residue means a bug
_IMAG_TOL = 1e-12


def _ladder_factor(j, q):
    """sqrt(j!/(j-q)!) as a running product; zero when j < q."""
    out = np.ones(j.shape)
    for i in range(q):
        out *= np.sqrt(np.maximum(j - i, 0))
    return out


def moment(state: FieldState, p: int, q: int) -> complex:
    """<a^dag^p a^q> in the reduced field state.

    Both atomic branches contribute separately; there are no cross terms
    between them once the atom is traced out. Terms whose shifted Fock index
    falls outside the truncated range are dropped.
    """
    if p < 0 or q < 0:
        raise ValueError("moment orders must be non-negative")
    if p > MAX_MOMENT_ORDER or q > MAX_MOMENT_ORDER:
        raise IndexOrderTooHigh(f"moment order ({p}, {q}) exceeds {MAX_MOMENT_ORDER}")
    gnd, exc = state.branch_levels()
    L = gnd.size
    j = np.arange(L)
    dst = j - q + p
    ok = (j >= q) & (dst >= 0) & (dst < L)
    j, dst = j[ok], dst[ok]
    weight = _ladder_factor(j, q) * _ladder_factor(dst, p)
    total = np.sum(weight * (np.conj(gnd[dst]) * gnd[j] + np.conj(exc[dst]) * exc[j]))
    return complex(total)


def _real_diag(z: complex, what: str) -> float:
    if abs(z.imag) > _IMAG_TOL * max(1.0, abs(z.real)):
        raise ArithmeticError(f"{what} has imaginary part {z.imag:.3e}")
    return z.real


def photon_number_dist(state: FieldState, n: int) -> float:
    """Weight |C2[n]|^2 + |C1[n]|^2 of manifold n.

    This pairs the excited amplitude on level n+1 with the ground amplitude
    on level n, so it is the coherent-state Poisson weight of n and does not
    depend on time. The probability of finding exactly n photons is
    :func:`level_occupation`.
    """
    if not 0 <= n < state.N:
        raise OutOfRange(f"n = {n} outside [0, {state.N})")
    return float(abs(state.excited[n]) ** 2 + abs(state.ground[n]) ** 2)


def level_occupation(state: FieldState) -> np.ndarray:
    """Diagonal <n|rho|n> of the reduced field for n = 0..N."""
    gnd, exc = state.branch_levels()
    return np.abs(gnd) ** 2 + np.abs(exc) ** 2


def mandel_q(state: FieldState) -> float:
    """Mandel parameter <a^dag^2 a^2>/<a^dag a> - <a^dag a>."""
    n1 = _real_diag(moment(state, 1, 1), "<a^dag a>")
    if n1 < 1e-14:
        raise VacuumState("mean photon number vanishes; Mandel Q undefined")
    n2 = _real_diag(moment(state, 2, 2), "<a^dag^2 a^2>")
    return n2 / n1 - n1


def antibunching_d1(state: FieldState) -> float:
    """Lowest-order antibunching witness <a^dag^2 a^2> - <a^dag a>^2 (negative = antibunched)."""
    n1 = _real_diag(moment(state, 1, 1), "<a^dag a>")
    n2 = _real_diag(moment(state, 2, 2), "<a^dag^2 a^2>")
    return n2 - n1 * n1


def squeezing(state: FieldState) -> tuple[float, float]:
    """Quadrature parameters (s_x, s_p) = 4 Var - 1 for x = (a + a^dag)/2, p = (a - a^dag)/2i.

    Squeezing in a quadrature shows up as a value in [-1, 0).
    """
    n1 = moment(state, 1, 1)
    a1 = moment(state, 0, 1)
    a2 = moment(state, 0, 2)
    ad1, ad2 = a1.conjugate(), a2.conjugate()
    sx = 2 * n1 + a2 + ad2 - a1**2 - ad1**2 - 2 * a1 * ad1
    sp = 2 * n1 - a2 - ad2 + a1**2 + ad1**2 - 2 * a1 * ad1
    return _real_diag(sx, "s_x"), _real_diag(sp, "s_p")


@dataclass(frozen=True)
class WitnessRecord:
    t: float
    mean_n: float
    q_mandel: float
    d1: float
    s_x: float
    s_p: float

    def csv_row(self) -> str:
        return ",".join(fmt(v) for v in astuple(self))


CSV_HEADER = ",".join(f.name for f in fields(WitnessRecord))


def witness_record(state: FieldState) -> WitnessRecord:
    n1 = _real_diag(moment(state, 1, 1), "<a^dag a>")
    sx, sp = squeezing(state)
    return WitnessRecord(
        t=state.t,
        mean_n=n1,
        q_mandel=mandel_q(state),
        d1=antibunching_d1(state),
        s_x=sx,
        s_p=sp,
    )


def witness_csv(records) -> str:
    """CSV text with header ``t,mean_n,q_mandel,d1,s_x,s_p``."""
    return "\n".join([CSV_HEADER] + [r.csv_row() for r in records]) + "\n"
