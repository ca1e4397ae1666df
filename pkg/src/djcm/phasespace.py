"""Wigner and Husimi functions of the reduced field state.

The Wigner function is evaluated as the alternating series over displaced
number states,

    W(gamma) = (2/pi) sum_k (-1)^k <gamma,k| rho |gamma,k>,

with the overlaps <gamma,k|n> written through associated Laguerre
polynomials. The Laguerre factors are generated with the three-term
recurrence in degree, normalized so that every intermediate stays bounded.

The k-sum is cut off per point once the displaced state's captured norm is
complete to 1e-12; by unitarity of the displacement the discarded tail of
the alternating series is bounded by the missing norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ._fmt import fmt
from ._parallel import ordered_map
from .dynamics import FieldState
from .errors import GridTooLarge, OrderOverflow

__all__ = [
    "GridSpec",
    "MAX_ORDER",
    "PhaseSpaceField",
    "displaced_number_overlap",
    "eval_grid",
    "husimi_points",
    "husimi_q",
    "wigner",
    "wigner_points",
]

MAX_ORDER = 4096
MAX_GRID_POINTS = 10_000_000

_NORM_TOL = 1e-12
# target number of complex entries per husimi block
_BLOCK = 1 << 20


@dataclass(frozen=True)
class GridSpec:
    """Rectangular window of the complex plane sampled on n_re x n_im nodes (endpoints included)."""

    re_min: float = -3.0
    re_max: float = 3.0
    im_min: float = -3.0
    im_max: float = 3.0
    n_re: int = 121
    n_im: int = 121

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("grid window must have re_min < re_max and im_min < im_max")
        if self.n_re < 2 or self.n_im < 2:
            raise ValueError("grid needs at least 2 nodes per axis")
        if self.n_re * self.n_im > MAX_GRID_POINTS:
            raise GridTooLarge(f"{self.n_re * self.n_im} nodes exceeds {MAX_GRID_POINTS}")

    @property
    def re(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.n_re)

    @property
    def im(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.n_im)

    @property
    def cell_area(self) -> float:
        return (self.re_max - self.re_min) / (self.n_re - 1) * (self.im_max - self.im_min) / (self.n_im - 1)

    def nodes(self) -> np.ndarray:
        """Complex nodes, shape (n_im, n_re); rows go up in imaginary part."""
        return self.re[None, :] + 1j * self.im[:, None]


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    spec: GridSpec
    values: np.ndarray
    kind: str
    integral: float

    def to_csv(self, long: bool = False) -> str:
        """Matrix CSV with a two-line header, or ``re,im,value`` rows when ``long``."""
        s = self.spec
        if long:
            lines = ["re,im,value"]
            re, im = s.re, s.im
            for i in range(s.n_im):
                for j in range(s.n_re):
                    lines.append(f"{fmt(re[j])},{fmt(im[i])},{fmt(self.values[i, j])}")
        else:
            lines = [
                f"# window: {fmt(s.re_min)},{fmt(s.re_max)},{fmt(s.im_min)},{fmt(s.im_max)}",
                f"# resolution: {s.n_re},{s.n_im}",
            ]
            lines += [",".join(fmt(v) for v in row) for row in self.values]
        return "\n".join(lines) + "\n"


def displaced_number_overlap(gamma: complex, k: int, n: int) -> complex:
    """<gamma, k | n> with |gamma, k> = D(gamma)|k>.

    For n >= k this is ``exp(-|g|^2/2) sqrt(k!/n!) conj(g)^(n-k) L_k^(n-k)(|g|^2)``;
    for n < k the roles swap, with ``-g`` in place of ``conj(g)``. Only
    non-negative upper Laguerre indices ever occur.
    """
    if k < 0 or n < 0:
        raise ValueError("Fock indices must be non-negative")
    if max(k, n) > MAX_ORDER:
        raise OrderOverflow(f"order {max(k, n)} exceeds {MAX_ORDER}")
    gamma = complex(gamma)
    x = gamma.real**2 + gamma.imag**2
    if n >= k:
        deg, d, c = k, n - k, gamma.conjugate()
    else:
        deg, d, c = n, k - n, -gamma
    pref = complex(math.exp(-0.5 * x))
    for j in range(1, d + 1):
        pref *= c / math.sqrt(j)
    # normalized Laguerre: v_j = sqrt(d! j!/(j+d)!) L_j^(d)(x)
    v_prev, v = 0.0, 1.0
    for j in range(deg):
        v_prev, v = v, ((2 * j + 1 + d - x) * v - math.sqrt(j * (j + d)) * v_prev) / math.sqrt(
            (j + 1) * (j + d + 1)
        )
    return pref * v


def _prefactors(gam, x, c, size):
    """exp(-x/2) c^d / sqrt(d!) for d < size, shape (P, size)."""
    z = np.empty((gam.size, size), dtype=complex)
    z[:, 0] = np.exp(-0.5 * x)
    if size > 1:
        z[:, 1:] = c[:, None] / np.sqrt(np.arange(1, size))[None, :]
    return np.cumprod(z, axis=1)


@njit(cache=True, nogil=True)
def _wigner_kernel(gnd, exc, re, im, orders, diagonal, w_out, captured_out):
    L = gnd.size
    occ = np.abs(gnd) ** 2 + np.abs(exc) ** 2
    for p in range(re.size):
        K = orders[p]
        x = re[p] * re[p] + im[p] * im[p]
        gam = complex(re[p], im[p])
        pg = np.zeros(K, dtype=np.complex128)
        pe = np.zeros(K, dtype=np.complex128)
        dg = np.zeros(K)

        # n >= k: Laguerre degree k, upper index d = n - k, prefactor conj(gamma)^d
        pref = complex(math.exp(-0.5 * x))
        c = gam.conjugate()
        for d in range(L):
            if d > 0:
                pref = pref * c / math.sqrt(d)
            v_prev = 0.0
            v = 1.0
            for k in range(min(K, L - d)):
                u = pref * v
                n = k + d
                pg[k] += u * gnd[n]
                pe[k] += u * exc[n]
                dg[k] += (u.real * u.real + u.imag * u.imag) * occ[n]
                v_new = ((2 * k + 1 + d - x) * v - math.sqrt(k * (k + d)) * v_prev) / math.sqrt(
                    (k + 1) * (k + d + 1)
                )
                v_prev = v
                v = v_new

        # k > n: Laguerre degree n, upper index d = k - n, prefactor (-gamma)^d
        pref = complex(math.exp(-0.5 * x))
        c = -gam
        for d in range(1, K):
            pref = pref * c / math.sqrt(d)
            v_prev = 0.0
            v = 1.0
            for n in range(min(L, K - d)):
                u = pref * v
                k = n + d
                pg[k] += u * gnd[n]
                pe[k] += u * exc[n]
                dg[k] += (u.real * u.real + u.imag * u.imag) * occ[n]
                v_new = ((2 * n + 1 + d - x) * v - math.sqrt(n * (n + d)) * v_prev) / math.sqrt(
                    (n + 1) * (n + d + 1)
                )
                v_prev = v
                v = v_new

        w = 0.0
        total = 0.0
        for k in range(K):
            prob = pg[k].real ** 2 + pg[k].imag ** 2 + pe[k].real ** 2 + pe[k].imag ** 2
            term = dg[k] if diagonal else prob
            w += term if k % 2 == 0 else -term
            total += prob
        w_out[p] = 2.0 / math.pi * w
        captured_out[p] = total


def _order_estimate(r, n_top):
    s = r + math.sqrt(n_top)
    K = int(math.ceil(s * s + 8 * s + 16))
    return -(-K // 16) * 16


def wigner_points(state: FieldState, gammas, terms: str = "full") -> np.ndarray:
    """Wigner function at an array of complex points.

    ``terms="full"`` uses the reduced density matrix |E><E| + |G><G| of the
    two atomic branches. ``terms="diagonal"`` keeps only the Fock-diagonal
    part of rho (the coherences dropped), for comparison with series that
    ignore them.
    """
    if terms not in ("full", "diagonal"):
        raise ValueError("terms must be 'full' or 'diagonal'")
    gam = np.asarray(gammas, dtype=complex)
    shape = gam.shape
    gam = gam.ravel()
    gnd, exc = state.branch_levels()
    occ = np.abs(gnd) ** 2 + np.abs(exc) ** 2
    normsq = float(np.sum(occ))
    live = np.flatnonzero(occ > 1e-30)
    n_top = int(live[-1]) if live.size else 0
    L = n_top + 1
    gnd, exc = gnd[:L].copy(), exc[:L].copy()

    orders = np.array([max(L, _order_estimate(abs(g), n_top)) for g in gam], dtype=np.int64)
    out = np.empty(gam.size)
    captured = np.empty(gam.size)
    todo = np.arange(gam.size)
    while todo.size:
        if orders[todo].max() > MAX_ORDER:
            raise OrderOverflow(f"Wigner series needs order {orders[todo].max()} > {MAX_ORDER}")
        w = np.empty(todo.size)
        cap = np.empty(todo.size)
        _wigner_kernel(
            gnd, exc, gam[todo].real.copy(), gam[todo].imag.copy(), orders[todo], terms == "diagonal", w, cap
        )
        out[todo], captured[todo] = w, cap
        todo = todo[normsq - cap > _NORM_TOL]
        orders[todo] *= 2
    return out.reshape(shape)


def wigner(state: FieldState, gamma: complex, terms: str = "full") -> float:
    """Wigner function W(gamma) normalized so that its integral over the plane is the trace."""
    return float(wigner_points(state, np.array([gamma]), terms)[0])


def husimi_points(state: FieldState, alphas) -> np.ndarray:
    """Husimi function (1/pi) <alpha|rho|alpha> at an array of complex points."""
    alp = np.asarray(alphas, dtype=complex)
    shape = alp.shape
    alp = alp.ravel()
    gnd, exc = state.branch_levels()
    L = gnd.size
    out = np.empty(alp.size)
    step = max(1, _BLOCK // L)
    for s in range(0, alp.size, step):
        a = alp[s : s + step]
        x = a.real**2 + a.imag**2
        coh = _prefactors(a, x, np.conj(a), L)  # <alpha|n>
        A = np.sum(coh * gnd, axis=1)
        B = np.sum(coh * exc, axis=1)
        out[s : s + step] = (A.real**2 + A.imag**2 + B.real**2 + B.imag**2) / math.pi
    return out.reshape(shape)


def husimi_q(state: FieldState, alpha: complex) -> float:
    """Husimi function Q(alpha) = <alpha|rho|alpha> / pi."""
    return float(husimi_points(state, np.array([alpha]))[0])


def eval_grid(
    state: FieldState,
    spec: GridSpec,
    kind: str = "wigner",
    *,
    terms: str = "full",
    workers: int | None = None,
) -> PhaseSpaceField:
    """Evaluate ``kind`` ("wigner" or "husimi") on every node of ``spec``.

    Rows are split across a thread pool; each node's value does not depend on
    how the rows are split. ``integral`` is the node sum times the cell area.
    """
    if kind not in ("wigner", "husimi"):
        raise ValueError("kind must be 'wigner' or 'husimi'")
    nodes = spec.nodes()
    if kind == "wigner":
        fn = lambda rows: wigner_points(state, rows, terms)  # noqa: E731
    else:
        fn = lambda rows: husimi_points(state, rows)  # noqa: E731
    n_chunks = min(spec.n_im, 64)
    bounds = np.linspace(0, spec.n_im, n_chunks + 1).astype(int)
    parts = ordered_map(fn, [nodes[a:b] for a, b in zip(bounds[:-1], bounds[1:]) if b > a], workers)
    values = np.concatenate(parts, axis=0)
    return PhaseSpaceField(spec=spec, values=values, kind=kind, integral=float(np.sum(values) * spec.cell_area))
