"""Wronskian (Crum) realization of the k-th order SUSY partner of the oscillator.

The intertwining operators are A_j^{+-} = (-+d/dx + alpha_j)/sqrt(2) with
alpha_j the log-derivative of the j-th transformed seed, so that

    B_k^+ f = A_k^+ ... A_1^+ f = (-1/sqrt(2))^k W(u_1..u_k, f) / W(u_1..u_k).

Wronskians and all their derivatives are evaluated exactly from seed jets:
the n-th derivative of a Wronskian is a weighted sum of determinants whose
rows are higher derivative orders, and each determinant is an LU
factorization (``numpy.linalg.det``).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import config
from . import taylor
from .errors import (
    DegenerateLevel,
    InsufficientOrder,
    OrderMismatch,
    PositionMismatch,
    SingularPoint,
)
from .seed_solutions import (
    SQRT2,
    SeedSpec,
    ValueJet,
    build_seed_chain,
    oscillator_jet,
    seed_creation_jet,
)


class Family(enum.IntEnum):
    """Extremal states of H_k, numbered as the P_IV solution families."""

    E1 = 1
    E2 = 2
    E3 = 3


@dataclass(frozen=True)
class WronskianJet:
    x: np.ndarray
    w: np.ndarray
    w1: np.ndarray
    w2: np.ndarray


@dataclass(frozen=True)
class Samples:
    """A complex function sampled on a grid."""

    x: np.ndarray
    values: np.ndarray = field(repr=False)

    def __iter__(self):
        return iter(zip(self.x.tolist(), self.values.tolist()))

    def __len__(self):
        return len(self.x)

    def l2_norm(self, xmin=None, xmax=None) -> float:
        return l2_norm(self.x, self.values, xmin, xmax)


@dataclass(frozen=True)
class ExtremalState(Samples):
    family: Family = Family.E1
    energy: float = 0.0


def l2_norm(x, values, xmin=None, xmax=None) -> float:
    from scipy.integrate import simpson

    x = np.asarray(x, dtype=float)
    mask = np.ones(x.shape, dtype=bool)
    if xmin is not None:
        mask &= x >= xmin
    if xmax is not None:
        mask &= x <= xmax
    return math.sqrt(simpson(np.abs(values[mask]) ** 2, x=x[mask]))


# -- Wronskian machinery -------------------------------------------------


@lru_cache(maxsize=None)
def derivative_expansion(m: int, n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """d^n/dx^n of an m x m Wronskian as {derivative-order rows: weight}.

    Differentiating a determinant increments one row at a time; an increment
    that collides with the next row gives a repeated row and drops out.
    """
    terms = {tuple(range(m)): 1}
    for _ in range(n):
        nxt: dict[tuple[int, ...], int] = {}
        for rows, c in terms.items():
            for i in range(m):
                bumped = rows[i] + 1
                if i + 1 < m and bumped == rows[i + 1]:
                    continue
                key = rows[:i] + (bumped,) + rows[i + 1 :]
                nxt[key] = nxt.get(key, 0) + c
        terms = nxt
    return tuple(sorted(terms.items()))


def _stack(jets: Sequence[ValueJet], need_order: int) -> np.ndarray:
    x0 = jets[0].x
    for j in jets[1:]:
        if np.shape(j.x) != np.shape(x0) or not np.array_equal(j.x, x0):
            raise PositionMismatch("all jets must be sampled at the same x")
    for j in jets:
        if j.order < need_order:
            raise OrderMismatch(f"jet order {j.order} < required {need_order}")
    return np.stack([j.values[: need_order + 1] for j in jets])


def _row_determinants(V: np.ndarray, rowsets) -> np.ndarray:
    """det[V[col, rows[r]]] for each row set; V has shape (m, order+1, *pts)."""
    idx = np.asarray(rowsets, dtype=int)  # (nsets, m)
    mats = V[:, idx]  # (m_cols, nsets, m_rows, *pts)
    mats = np.moveaxis(mats, 0, -1)  # (nsets, m_rows, *pts, m_cols)
    mats = np.moveaxis(mats, 1, -2)  # (nsets, *pts, m_rows, m_cols)
    return np.linalg.det(mats)


def wronskian_taylor(jets: Sequence[ValueJet], n: int) -> np.ndarray:
    """Taylor series [W^(0), W^(1)/1!, ..., W^(n)/n!] of W(jets) at the jets' x."""
    if not jets:
        shape = ()
        return taylor.constant(1.0, n, shape)
    m = len(jets)
    V = _stack(jets, m - 1 + n)
    expansions = [derivative_expansion(m, d) for d in range(n + 1)]
    rowsets = sorted({rows for exp in expansions for rows, _ in exp})
    where = {rows: i for i, rows in enumerate(rowsets)}
    dets = _row_determinants(V, rowsets)
    out = np.zeros((n + 1,) + dets.shape[1:], dtype=complex)
    for d, exp in enumerate(expansions):
        acc = np.zeros(dets.shape[1:], dtype=complex)
        for rows, c in exp:
            acc = acc + c * dets[where[rows]]
        out[d] = acc / math.factorial(d)
    return out


def wronskian_jet(jets: Sequence[ValueJet]) -> WronskianJet:
    """W, W', W'' by row-replacement determinants (jets of order >= k+1)."""
    k = len(jets)
    V = _stack(jets, k + 1)
    rows_w = tuple(range(k))
    rows_w1 = tuple(range(k - 1)) + (k,)
    rows_w2a = tuple(range(k - 1)) + (k + 1,)
    sets = [rows_w, rows_w1, rows_w2a]
    if k >= 2:
        sets.append(tuple(range(k - 2)) + (k - 1, k))
    d = _row_determinants(V, sets)
    w2 = d[2] + (d[3] if k >= 2 else 0)
    return WronskianJet(x=jets[0].x, w=d[0], w1=d[1], w2=w2)


def singularity_measure(jets: Sequence[ValueJet]) -> np.ndarray:
    """|W| divided by the product of column norms (Hadamard-normalized).

    Column norms include derivative order m, so that for m = 1 the measure
    is |u| / |(u, u')| rather than identically one.
    """
    if not jets:
        return np.ones(np.shape(np.asarray(0.0)))
    m = len(jets)
    V = _stack(jets, m)
    w = _row_determinants(V, [tuple(range(m))])[0]
    norms = np.prod(np.sqrt(np.sum(np.abs(V) ** 2, axis=1)), axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.abs(w) / norms


def _check_regular(jets, what, rtol=config.SINGULAR_RTOL, error=SingularPoint):
    if not jets:
        return
    measure = singularity_measure(jets)
    bad = ~(measure >= rtol)  # NaN counts as singular
    if np.any(bad):
        locs = np.atleast_1d(jets[0].x)[np.atleast_1d(bad)] if np.ndim(jets[0].x) else [float(jets[0].x)]
        raise error(f"{what} vanishes at x={list(np.round(locs, 6))[:5]}", locations=locs)


# -- seeds, operators ----------------------------------------------------


def seed_chain(spec: SeedSpec, x, order: int) -> list[ValueJet]:
    return build_seed_chain(spec, x, max(order, spec.k + 1))


def crum_taylor(seeds: Sequence[ValueJet], target: ValueJet, n: int) -> np.ndarray:
    """Taylor series (order n) of B^+ f for the seed list; identity if empty."""
    k = len(seeds)
    if not seeds:
        return target.taylor[: n + 1]
    num = wronskian_taylor(list(seeds) + [target], n)
    den = wronskian_taylor(seeds, n)
    return (-1.0 / SQRT2) ** k * taylor.div(num, den)


def crum_map(spec: SeedSpec | None, target: ValueJet, seeds: Sequence[ValueJet] | None = None):
    """Value of B_k^+ f at the target jet's x (unnormalized).

    ``spec=None`` with ``seeds=[]`` is the identity (k = 0).
    """
    if seeds is None:
        if spec is None:
            seeds = []
        else:
            if target.order < spec.k:
                raise InsufficientOrder(f"target jet needs order >= {spec.k}")
            seeds = seed_chain(spec, target.x, target.order)
    _check_regular(seeds, "W(u_1..u_k)")
    return crum_taylor(seeds, target, 0)[0]


def partner_potential(spec: SeedSpec, x) -> np.ndarray:
    """V_k = x^2/2 - (ln W)''."""
    x = np.asarray(x, dtype=float)
    seeds = seed_chain(spec, x, spec.k + 1)
    _check_regular(seeds, "W(u_1..u_k)")
    wj = wronskian_jet(seeds)
    return 0.5 * x * x - (wj.w2 * wj.w - wj.w1 * wj.w1) / (wj.w * wj.w)


def potential_taylor(spec: SeedSpec, x, n: int) -> np.ndarray:
    """Taylor series of V_k to order n."""
    seeds = seed_chain(spec, x, spec.k + n + 2)
    w = wronskian_taylor(seeds, n + 2)
    lw2 = taylor.deriv(taylor.log_deriv(w))
    xs = taylor.variable(x, n)
    return taylor.sub(0.5 * taylor.mul(xs, xs), lw2)


def superpotentials(spec: SeedSpec, x, n: int) -> list[np.ndarray]:
    """Taylor series (order n) of alpha_j = (ln W_j / W_{j-1})', j = 1..k."""
    seeds = seed_chain(spec, x, spec.k + n + 1)
    logs = [taylor.log_deriv(wronskian_taylor(seeds[:j], n + 1)) for j in range(1, spec.k + 1)]
    alphas = [logs[0]]
    for j in range(1, spec.k):
        alphas.append(taylor.sub(logs[j], logs[j - 1]))
    return alphas


@dataclass(frozen=True)
class OperatorFactor:
    """A^{+-} = (-+d/dx + alpha)/sqrt(2) with ``alpha`` a function of x."""

    alpha: Callable[[np.ndarray], np.ndarray]
    direction: str  # "raise" or "lower"

    def __post_init__(self):
        if self.direction not in ("raise", "lower"):
            raise ValueError("direction must be 'raise' or 'lower'")

    @property
    def sign(self) -> float:
        return -1.0 if self.direction == "raise" else 1.0


def apply_factor_taylor(alpha: np.ndarray, f: np.ndarray, direction: str) -> np.ndarray:
    """(-+f' + alpha f)/sqrt(2) on Taylor series; the result loses one order."""
    sign = -1.0 if direction == "raise" else 1.0
    df = taylor.deriv(f)
    return taylor.add(sign * df, taylor.mul(alpha, f)) / SQRT2


def b_plus_taylor(alphas, f):
    for alpha in alphas:
        f = apply_factor_taylor(alpha, f, "raise")
    return f


def b_minus_taylor(alphas, f):
    for alpha in reversed(alphas):
        f = apply_factor_taylor(alpha, f, "lower")
    return f


# -- states of H_k ---------------------------------------------------------


def _gaussian_jet(x, order):
    jet = oscillator_jet(x, 0, order)
    return ValueJet(x=jet.x, values=jet.values * np.pi**0.25, epsilon=0.5)


def extremal_energy(spec: SeedSpec, family: Family) -> float:
    family = Family(family)
    if family is Family.E1:
        return spec.epsilon1 - (spec.k - 1)
    if family is Family.E2:
        return 0.5
    return spec.epsilon1 + 1.0


def extremal_parts(spec: SeedSpec, family: Family, x, n: int):
    """(numerator, denominator) Wronskian series of the extremal state, with
    the state's constant prefactor.  Checks the denominator for zeros."""
    family = Family(family)
    k = spec.k
    seeds = seed_chain(spec, x, k + n + 1)
    _check_regular(seeds, "W(u_1..u_k)")
    den = wronskian_taylor(seeds, n)
    if family is Family.E1:
        return wronskian_taylor(seeds[: k - 1], n) if k > 1 else taylor.constant(1.0, n, np.shape(x)), den, 1.0, seeds[: k - 1]
    if family is Family.E2:
        extra = _gaussian_jet(x, k + n + 1)
    else:
        extra = seed_creation_jet(spec, x, k + n + 1)
    cols = list(seeds) + [extra]
    return wronskian_taylor(cols, n), den, (-1.0 / SQRT2) ** k, cols


def extremal_taylor(spec: SeedSpec, family: Family, x, n: int) -> np.ndarray:
    num, den, pref, _ = extremal_parts(spec, family, x, n)
    return pref * taylor.div(num, den)


def extremal_state(spec: SeedSpec, family: Family, grid) -> ExtremalState:
    """Extremal state of H_k (unnormalized) for the given family."""
    x = np.asarray(grid, dtype=float)
    values = extremal_taylor(spec, family, x, 0)[0]
    return ExtremalState(x=x, values=values, family=Family(family), energy=extremal_energy(spec, family))


def mapped_normalization(spec: SeedSpec, n: int) -> complex:
    e_n = n + 0.5
    prod = 1.0
    for eps in spec.energies:
        if abs(e_n - eps) < config.POLE_TOL:
            raise DegenerateLevel(f"E_{n} = {e_n} coincides with a factorization energy")
        prod *= e_n - eps
    return cmath.sqrt(prod)


def mapped_taylor(spec: SeedSpec, n_level: int, x, n: int, normalized: bool = True) -> np.ndarray:
    """Taylor series of B_k^+ psi_n (divided by the normalization if asked)."""
    norm = mapped_normalization(spec, n_level) if normalized else 1.0
    seeds = seed_chain(spec, x, spec.k + n + 1)
    _check_regular(seeds, "W(u_1..u_k)")
    target = oscillator_jet(x, n_level, spec.k + n + 1)
    return crum_taylor(seeds, target, n) / norm


def mapped_eigenfunction(spec: SeedSpec, n: int, grid) -> Samples:
    """psi_n^(k) = B_k^+ psi_n / [(E_n - eps_1)...(E_n - eps_k)]^(1/2)."""
    x = np.asarray(grid, dtype=float)
    return Samples(x=x, values=mapped_taylor(spec, n, x, 0)[0])


def new_level_taylor(spec: SeedSpec, j: int, x, n: int) -> np.ndarray:
    if not 1 <= j <= spec.k:
        raise ValueError(f"level index j must be in 1..{spec.k}")
    seeds = seed_chain(spec, x, spec.k + n + 1)
    _check_regular(seeds, "W(u_1..u_k)")
    rest = seeds[: j - 1] + seeds[j:]
    num = wronskian_taylor(rest, n) if rest else taylor.constant(1.0, n, np.shape(x))
    return taylor.div(num, wronskian_taylor(seeds, n))


def new_level_eigenfunction(spec: SeedSpec, j: int, grid) -> Samples:
    """W(u_1..u_{j-1}, u_{j+1}..u_k) / W(u_1..u_k) (unnormalized), energy eps_j."""
    x = np.asarray(grid, dtype=float)
    return Samples(x=x, values=new_level_taylor(spec, j, x, 0)[0])


def crossings(w, x, *, require_both: bool = True) -> list[float]:
    """Grid cells where the sampled function w changes sign.

    Real-valued w: Re w changes sign (linear interpolation of the root).
    Complex w: Re and Im must both change sign in the same cell, unless
    ``require_both`` is False, in which case complex w is ignored.
    """
    w = np.asarray(w)
    x = np.asarray(x, dtype=float)
    re, im = w.real, w.imag if np.iscomplexobj(w) else np.zeros_like(w.real)
    real_valued = np.all(np.abs(im) <= 1e-14 * np.maximum(np.abs(re), 1e-300))
    re_change = np.signbit(re[:-1]) != np.signbit(re[1:])
    if real_valued:
        cells = re_change
    elif require_both:
        cells = re_change & (np.signbit(im[:-1]) != np.signbit(im[1:]))
    else:
        return []
    out = []
    for i in np.flatnonzero(cells):
        r0, r1 = re[i], re[i + 1]
        t = r0 / (r0 - r1) if r0 != r1 else 0.5
        out.append(float(x[i] + t * (x[i + 1] - x[i])))
    return out


def singularity_scan(
    spec: SeedSpec,
    grid,
    *,
    rtol: float = config.SCAN_RTOL,
    window: int = config.SCAN_WINDOW,
) -> list[float]:
    """Approximate real zeros of W(u_1..u_k) on the grid.

    A point is reported where |W| drops below ``rtol`` times the median |W|
    over a sliding window of +-``window`` samples, or where Re W and Im W
    both change sign within one grid cell (only Re W for real W).
    """
    x = np.asarray(grid, dtype=float)
    try:
        seeds = seed_chain(spec, x, spec.k + 1)
        w = wronskian_taylor(seeds, 0)[0]
    except Exception:  # a failed evaluation is itself a singular verdict
        return [float("nan")]
    aw = np.abs(w)
    if not np.all(np.isfinite(w)):
        return sorted(set(x[~np.isfinite(w)].tolist()))
    found: list[float] = []
    padded = np.pad(aw, window, mode="edge")
    windows = np.lib.stride_tricks.sliding_window_view(padded, 2 * window + 1)
    local = np.median(windows, axis=1)
    dips = aw < rtol * local
    found.extend(x[dips].tolist())
    found.extend(crossings(w, x, require_both=True))
    if not found:
        return []
    found.sort()
    spacing = np.min(np.diff(x)) if len(x) > 1 else 0.0
    merged = [found[0]]
    for v in found[1:]:
        if v - merged[-1] > 1.5 * spacing:
            merged.append(v)
    return merged
