"""Painleve IV solutions g(x; a, b) built from extremal states of H_k.

    g'' = g'^2/(2g) + 3/2 g^3 + 4 x g^2 + 2 (x^2 - a) g + b/g

The three families take the extremal states E1, E2, E3 (in that cyclic
order) as the state entering g = -x - (ln psi)'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import config
from . import taylor
from .errors import DegenerateG, SingularExtremalState, SingularPoint
from .seed_solutions import SeedSpec
from .susy_transform import Family, _check_regular, crossings, extremal_energy, extremal_parts

_HALF = Fraction(1, 2)
_THREE_HALVES = Fraction(3, 2)


@dataclass(frozen=True)
class PIVParams:
    a: float | Fraction
    b: float | Fraction
    family: Family
    epsilon1: float | Fraction
    k: int


@dataclass(frozen=True)
class PIVSolutionSample:
    """g, g', g'' and the P_IV residual, one entry per grid point.

    ``residual`` is NaN where |g| is below the degeneracy threshold (the
    b/g term is meaningless there).
    """

    x: np.ndarray
    g: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    residual: np.ndarray
    params: PIVParams | None = None
    psi_abs: np.ndarray | None = None

    def __len__(self):
        return len(self.x)


def family_params(family: Family, epsilon1, k: int) -> PIVParams:
    """(a, b) of the family; exact when ``epsilon1`` is a Fraction or int."""
    family = Family(family)
    if k < 1:
        raise ValueError("k must be >= 1")
    e = epsilon1
    if family is Family.E1:
        a = -e + 2 * k - _THREE_HALVES
        b = -2 * (e + _HALF) ** 2
    elif family is Family.E2:
        a = 2 * e - k
        b = -2 * k**2
    else:
        a = -e - k - _THREE_HALVES
        b = -2 * (e - k + _HALF) ** 2
    if not isinstance(e, (int, Fraction)):
        a, b = float(a) + 0.0, float(b) + 0.0  # no negative zeros
    return PIVParams(a=a, b=b, family=family, epsilon1=epsilon1, k=k)


def abe_params(e1, e2, e3):
    """a = e2 + e3 - 2 e1 - 1, b = -2 (e2 - e3)^2."""
    return e2 + e3 - 2 * e1 - 1, -2 * (e2 - e3) ** 2


def extremal_energy_triple(epsilon1, k: int):
    """(E1, E2, E3) = (eps1 - k + 1, 1/2, eps1 + 1)."""
    half = _HALF if isinstance(epsilon1, (int, Fraction)) else 0.5
    return epsilon1 - k + 1, half, epsilon1 + 1


def piv_rhs(x, g, g1, a, b):
    return g1 * g1 / (2.0 * g) + 1.5 * g**3 + 4.0 * x * g * g + 2.0 * (x * x - a) * g + b / g


def _residual(x, g, g1, g2, a, b, gtol):
    ok = np.abs(g) >= gtol
    safe = np.where(ok, g, 1.0)
    res = g2 - piv_rhs(x, safe, g1, float(a), float(b))
    return np.where(ok, res, np.nan + 0j)


def _g_parts(spec, family, x, n):
    x = np.asarray(x, dtype=float)
    try:
        num, den, pref, cols = extremal_parts(spec, family, x, n + 1)
    except SingularPoint as exc:
        raise SingularExtremalState(f"extremal state {Family(family).name} is singular: {exc}", exc.locations) from exc
    _check_regular(cols, f"extremal state {Family(family).name}", error=SingularExtremalState)
    dlog = taylor.sub(taylor.log_deriv(num), taylor.log_deriv(den))
    xs = taylor.variable(x, n)
    g = -taylor.add(xs, dlog)
    psi_abs = np.abs(pref * num[0] / den[0])
    return g, psi_abs, num, den


def g_taylor(spec: SeedSpec, family: Family, x, n: int = 2):
    """Taylor series (order n) of g for the family, plus the state's |psi|."""
    g, psi_abs, _, _ = _g_parts(spec, family, x, n)
    return g, psi_abs


def g_solution(
    spec: SeedSpec,
    family: Family,
    grid,
    *,
    gtol: float = config.DEGENERATE_G_TOL,
    chunks: int = 1,
    map_fn=map,
) -> PIVSolutionSample:
    """g = -x - psi'/psi with exact g', g'' and the P_IV residual.

    The grid may be split into ``chunks`` pieces evaluated through
    ``map_fn`` (e.g. an executor's ordered ``map``); every value is computed
    pointwise, so the result does not depend on the split.  Singularity and
    degeneracy checks always see the whole grid.
    """
    family = Family(family)
    x = np.asarray(grid, dtype=float)
    if x.ndim == 1 and x.size > 1:
        pieces = np.array_split(x, max(1, min(int(chunks), x.size)))
        parts = list(map_fn(lambda piece: _g_parts(spec, family, piece, 2), pieces))
        series = np.concatenate([p[0] for p in parts], axis=-1)
        psi_abs = np.concatenate([p[1] for p in parts])
        num0 = np.concatenate([p[2][0] for p in parts])
        den0 = np.concatenate([p[3][0] for p in parts])
    else:
        series, psi_abs, num, den = _g_parts(spec, family, x, 2)
    if x.ndim == 1 and len(x) > 1:
        # real Wronskians can change sign between samples without coming
        # close to zero at any of them; either way g has a pole there
        hits = crossings(num0, x, require_both=False) + crossings(den0, x, require_both=False)
        if hits:
            raise SingularExtremalState(
                f"extremal state {family.name} has a real zero or pole near x={sorted(hits)[:5]}", sorted(hits)
            )
    derivs = taylor.to_derivatives(series)
    g, g1, g2 = derivs[0], derivs[1], derivs[2]
    if np.all(np.abs(g) < gtol):
        raise DegenerateG("g vanishes on the whole grid")
    params = family_params(family, spec.epsilon1, spec.k)
    residual = _residual(x, g, g1, g2, params.a, params.b, gtol)
    return PIVSolutionSample(x=x, g=g, g1=g1, g2=g2, residual=residual, params=params, psi_abs=psi_abs)


def g_function(spec: SeedSpec, family: Family):
    """x -> g(x) as a plain callable (used by finite-difference oracles)."""

    def g(x):
        return g_taylor(spec, family, np.asarray(x, dtype=float), 0)[0][0]

    return g


def fd_derivatives(x, g):
    """5-point central first and second derivatives on a uniform grid.

    Returns (interior slice, g', g'').
    """
    x = np.asarray(x, dtype=float)
    h = np.diff(x)
    if len(x) < 5:
        raise ValueError("finite-difference mode needs at least 5 samples")
    step = (x[-1] - x[0]) / (len(x) - 1)
    if np.max(np.abs(h - step)) > 1e-9 * max(1.0, abs(step)):
        raise ValueError("finite-difference mode needs a uniform grid")
    gm2, gm1, g0, gp1, gp2 = g[:-4], g[1:-3], g[2:-2], g[3:-1], g[4:]
    d1 = (gm2 - 8.0 * gm1 + 8.0 * gp1 - gp2) / (12.0 * step)
    d2 = (-gm2 + 16.0 * gm1 - 30.0 * g0 + 16.0 * gp1 - gp2) / (12.0 * step * step)
    return slice(2, -2), d1, d2


def piv_residual(
    samples: PIVSolutionSample,
    params: PIVParams | None = None,
    *,
    mode: str = "exact",
    gtol: float = config.DEGENERATE_G_TOL,
) -> float:
    """Max |g'' - RHS| over the samples.

    ``mode="exact"`` uses the stored g', g''; ``mode="fd"`` ignores them and
    differentiates the stored g on its (uniform) grid.
    """
    params = params or samples.params
    if params is None:
        raise ValueError("P_IV parameters are required")
    g = np.asarray(samples.g, dtype=complex)
    if np.all(np.abs(g) < gtol):
        raise DegenerateG("g vanishes on the whole grid")
    x = np.asarray(samples.x, dtype=float)
    if mode == "exact":
        res = _residual(x, g, samples.g1, samples.g2, params.a, params.b, gtol)
    elif mode == "fd":
        sl, d1, d2 = fd_derivatives(x, g)
        res = _residual(x[sl], g[sl], d1, d2, params.a, params.b, gtol)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return float(np.nanmax(np.abs(res)))


def _stencil(g, x, h):
    gm2, gm1, g0, gp1, gp2 = (g(x + s * h) for s in (-2, -1, 0, 1, 2))
    d1 = (gm2 - 8.0 * gm1 + 8.0 * gp1 - gp2) / (12.0 * h)
    d2 = (-gm2 + 16.0 * gm1 - 30.0 * g0 + 16.0 * gp1 - gp2) / (12.0 * h * h)
    return g0, d1, d2


def g_function_extended(spec: SeedSpec, family: Family, dps: int = config.EXTENDED_PRECISION_DPS):
    """x -> g(x) evaluated entirely in mpmath at ``dps`` digits.

    Works on mpmath numbers and returns mpmath numbers.  Seeds come from
    mpmath's 1F1 and the Wronskians from explicit determinants, so this
    path shares no arithmetic with the Taylor-series evaluator.
    """
    import mpmath

    family = Family(family)
    k = spec.k
    ctx = mpmath.mp

    def kummer_value(x, eps, p, q):
        z = x * x
        a = (1 - 2 * eps) / 4
        m1 = ctx.hyp1f1(a, 0.5, z) if p else 0
        m2 = ctx.hyp1f1(a + 0.5, 1.5, z) if q else 0
        return ctx.exp(-z / 2) * (p * m1 + x * q * m2)

    def lower(eps, p, q):
        a = (1 - 2 * eps) / 4
        return eps - 1, q / ctx.sqrt(2), 4 * a * p / ctx.sqrt(2)

    def complete(x, eps, v0, v1, order):
        vals = [v0, v1]
        qx = x * x - 2 * eps
        for m in range(order - 1):
            nxt = qx * vals[m]
            if m >= 1:
                nxt += 2 * m * x * vals[m - 1]
            if m >= 2:
                nxt += m * (m - 1) * vals[m - 2]
            vals.append(nxt)
        return vals

    def det(rows):
        # Laplace expansion along the first row; matrices are at most (k+1)^2
        if len(rows) == 1:
            return rows[0][0]
        total = 0
        for j, entry in enumerate(rows[0]):
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            term = entry * det(minor)
            total = total + term if j % 2 == 0 else total - term
        return total

    def log_deriv_wronskian(cols):
        m = len(cols)
        if m == 0:
            return 0
        w = det([[c[r] for c in cols] for r in range(m)])
        w1 = det([[c[r] for c in cols] for r in list(range(m - 1)) + [m]])
        return w1 / w

    def g(x):
        with ctx.workdps(dps):
            x = ctx.mpf(x)
            order = k + 1
            # u_1 .. u_{k+1} along the a^- chain; u_j' = sqrt(2) u_{j+1} - x u_j
            state = (ctx.mpf(spec.epsilon1), ctx.mpc(1), ctx.mpc(spec.lam, spec.kappa))
            energies, values = [], []
            for _ in range(k + 1):
                energies.append(state[0])
                values.append(kummer_value(x, *state))
                state = lower(*state)
            seeds = [
                complete(x, energies[j], values[j], ctx.sqrt(2) * values[j + 1] - x * values[j], order)
                for j in range(k)
            ]
            if family is Family.E1:
                num, den = seeds[: k - 1], seeds
            else:
                if family is Family.E2:
                    v = ctx.exp(-x * x / 2)
                    extra = complete(x, ctx.mpf(0.5), v, -x * v, order)
                else:
                    # v = a^+ u_1 and a^- v = (eps1 + 1/2) u_1
                    eps1 = energies[0]
                    a = (1 - 2 * eps1) / 4
                    c = ctx.mpc(spec.lam, spec.kappa)
                    v = kummer_value(x, eps1 + 1, -c / ctx.sqrt(2), 2 * (1 - 2 * a) / ctx.sqrt(2))
                    dv = ctx.sqrt(2) * (eps1 + 0.5) * values[0] - x * v
                    extra = complete(x, eps1 + 1, v, dv, order)
                num, den = seeds + [extra], seeds
            return -x - log_deriv_wronskian(num) + log_deriv_wronskian(den)

    return g


def _stencil_extended(g_ext, x, h, dps):
    """Central 3-point g', g'' in mpmath; at ``dps`` digits the O(h^2)
    truncation can be made negligible with a tiny step."""
    import mpmath

    out = np.zeros((3,) + np.shape(x), dtype=complex)
    with mpmath.workdps(dps):
        hm = mpmath.mpf(h)
        for i, xi in np.ndenumerate(np.asarray(x, dtype=float)):
            xm = mpmath.mpf(xi)
            gm, g0, gp = g_ext(xm - hm), g_ext(xm), g_ext(xm + hm)
            out[(0,) + i] = complex(g0)
            out[(1,) + i] = complex((gp - gm) / (2 * hm))
            out[(2,) + i] = complex((gp - 2 * g0 + gm) / (hm * hm))
    return out[0], out[1], out[2]


def fd_jet(g, x, h="auto"):
    """(g, g', g'') at x from 5-point stencils, plus an error estimate of g''.

    ``h="auto"`` starts at ``config.FD_STEP`` and halves the step, per point,
    only while successive differences of g'' still shrink at the stencil's
    h^4 rate (at least 4x); once rounding noise dominates the ratio collapses
    and refinement stops.  The estimate is the last accepted difference.
    """
    x = np.asarray(x, dtype=float)
    if h != "auto":
        g0, d1, d2 = _stencil(g, x, float(h))
        return g0, d1, d2, np.full(x.shape, np.nan)
    steps = [config.FD_STEP / 2**i for i in range(5)]
    results = [_stencil(g, x, s) for s in steps]
    g0 = results[0][0]
    diffs = [np.abs(results[i][2] - results[i + 1][2]) for i in range(len(steps) - 1)]
    pick = np.zeros(x.shape, dtype=int)
    going = np.ones(x.shape, dtype=bool)
    for i in range(len(diffs) - 1):
        going &= diffs[i + 1] * 4.0 <= diffs[i]
        pick = np.where(going, i + 1, pick)
    d1 = np.choose(pick, [r[1] for r in results])
    d2 = np.choose(pick, [r[2] for r in results])
    err = np.choose(pick, diffs)
    return g0, d1, d2, err


def piv_residual_fd_function(
    g,
    params: PIVParams,
    x,
    h="auto",
    gtol=config.DEGENERATE_G_TOL,
    *,
    g_extended=None,
    tol: float | None = None,
    dps: int = config.EXTENDED_PRECISION_DPS,
):
    """Pointwise residual with g', g'' from 5-point stencils around x.

    ``g`` is a callable; the stored exact derivatives are never consulted.
    Near complex poles close to the real axis double precision cannot
    resolve g'' by differencing.  When ``g_extended`` (an mpmath evaluator,
    see :func:`g_function_extended`) and ``tol`` are given, every point whose
    residual or g'' error estimate exceeds ``tol / 10`` is recomputed with an
    extended-precision stencil of step ``config.FD_STEP_EXTENDED``.
    """
    x = np.asarray(x, dtype=float)
    g0, d1, d2, err = fd_jet(g, x, h)
    res = _residual(x, g0, d1, d2, params.a, params.b, gtol)
    if g_extended is None or tol is None:
        return res
    suspect = ~(np.abs(res) <= tol / 10) | (err > tol / 10)
    suspect &= np.abs(g0) >= gtol
    if np.any(suspect):
        xs = x[suspect]
        e0, e1, e2 = _stencil_extended(g_extended, xs, config.FD_STEP_EXTENDED, dps)
        res = res.copy()
        res[suspect] = _residual(xs, e0, e1, e2, params.a, params.b, gtol)
    return res


# -- parameter space ------------------------------------------------------


@dataclass(frozen=True)
class ScanPoint:
    family: Family
    epsilon1: float
    k: int
    a: float
    b: float
    classification: str


def classify(family: Family, epsilon1) -> str:
    if Family(family) is Family.E1 and epsilon1 < 0.5:
        return "real-or-complex"
    return "complex-only"


def frange(start, stop, step):
    """Inclusive arithmetic progression start, start+step, ..., <= stop."""
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(max(count, 0))]


def parameter_space_scan(epsilon1_range, k_range, families=(1, 2, 3)) -> list[ScanPoint]:
    """(a, b) curves of the solution families.

    ``epsilon1_range`` is (start, stop, step); ``k_range`` is (kmin, kmax),
    both inclusive.
    """
    eps_values = frange(*epsilon1_range)
    kmin, kmax = k_range
    points = []
    for fam in families:
        fam = Family(fam)
        for k in range(int(kmin), int(kmax) + 1):
            for e in eps_values:
                p = family_params(fam, e, k)
                points.append(ScanPoint(fam, e, k, p.a, p.b, classify(fam, e)))
    return points
