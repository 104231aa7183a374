"""Complex Gamma and confluent hypergeometric (Kummer) functions.

``kummer_1f1`` evaluates 1F1(a, b; z) for complex parameters.  Small
arguments use the power series with compensated (Kahan) summation; for
``|z|`` above ``config.SERIES_SWITCH_ABS_Z`` the Kummer transformation
1F1(a, b; z) = e^z 1F1(b - a, b; -z) maps the argument to the right half
plane and the large-``|z|`` asymptotic expansion is summed to its smallest
term.  Where the truncated expansion cannot reach ``ASYMPTOTIC_RTOL`` the
series is used instead.

All routines accept a scalar or a numpy array for ``z``; the summation
stops independently per element so results do not depend on how a grid is
chunked.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import NonFiniteValue, PoleAtB, PoleAtNonPositiveInteger, RangeExceeded

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EPS = np.finfo(float).eps


def _near_non_positive_integer(z: complex, tol: float = config.POLE_TOL) -> bool:
    z = complex(z)
    if abs(z.imag) > tol or z.real > tol:
        return False
    return abs(z.real - round(z.real)) <= tol


def _require_finite(value, what):
    if not np.all(np.isfinite(value)):
        raise NonFiniteValue(f"{what} produced a non-finite value")
    return value


def _lanczos_gamma(z: complex) -> complex:
    if z.real < 0.5:
        # reflection
        return cmath.pi / (cmath.sin(cmath.pi * z) * _lanczos_gamma(1.0 - z))
    z = z - 1.0
    acc = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return cmath.exp(_HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t) * acc


def gamma_fn(z: complex, *, pole_tol: float = config.POLE_TOL) -> complex:
    """Gamma function of a complex argument (Lanczos, g=7, 9 terms).

    Raises ``PoleAtNonPositiveInteger`` within ``pole_tol`` of 0, -1, -2, ...
    """
    z = complex(z)
    if _near_non_positive_integer(z, pole_tol):
        raise PoleAtNonPositiveInteger(f"Gamma has a pole at z={z}")
    try:
        value = _lanczos_gamma(z)
    except OverflowError:
        value = complex("inf")
    if not cmath.isfinite(value):
        raise NonFiniteValue(f"Gamma overflow at z={z}")
    return value


def rgamma(z: complex, *, pole_tol: float = config.POLE_TOL) -> complex:
    """1/Gamma(z); exactly zero at the poles of Gamma."""
    z = complex(z)
    if _near_non_positive_integer(z, pole_tol):
        return 0j
    try:
        return 1.0 / _lanczos_gamma(z)
    except OverflowError:
        return 0j


@dataclass(frozen=True)
class KummerParams:
    """Arguments of 1F1(a, b; z).  ``z`` may be a numpy array."""

    a: complex
    b: complex
    z: complex | np.ndarray

    def __post_init__(self):
        if _near_non_positive_integer(self.b):
            raise PoleAtB(f"1F1 is undefined for b={self.b}")


def _kahan_series(a: complex, b: complex, z: np.ndarray, max_terms: int, with_cond=False):
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    term = np.ones_like(z)
    abs_sum = np.ones(z.shape)
    active = np.ones(z.shape, dtype=bool)
    absz = np.abs(z)
    for n in range(max_terms):
        term = term * ((a + n) / ((b + n) * (n + 1.0))) * z
        abs_sum = np.where(active, abs_sum + np.abs(term), abs_sum)
        y = term - comp
        t = total + y
        new_comp = (t - total) - y
        total = np.where(active, t, total)
        comp = np.where(active, new_comp, comp)
        # tail is dominated by a geometric series once the term ratio is < 1/2
        ratio_ok = absz * abs(a + n + 1) < 0.5 * abs(b + n + 1) * (n + 2)
        done = (np.abs(term) <= _EPS * 0.25 * np.abs(total)) & ratio_ok
        done |= term == 0
        active &= ~done
        if not active.any():
            if with_cond:
                with np.errstate(divide="ignore", invalid="ignore"):
                    cond = np.where(total != 0, abs_sum / np.abs(total), np.inf)
                return total, cond
            return total
    raise RangeExceeded(f"1F1 series did not converge in {max_terms} terms")


def _series(a: complex, b: complex, z: np.ndarray, max_terms: int, with_error=False):
    """Power series, Kummer-transformed on the left half plane.

    With ``with_error`` also returns the rounding error estimate
    eps * sum|terms| / |sum|.
    """
    out = np.empty_like(z)
    err = np.empty(z.shape)
    polynomial = _near_non_positive_integer(a)
    left = (z.real < 0) & (not polynomial)
    if left.any():
        zl = z[left]
        v, c = _kahan_series(b - a, b, -zl, max_terms, with_cond=True)
        out[left] = np.exp(zl) * v
        err[left] = c
    right = ~left
    if right.any():
        v, c = _kahan_series(a, b, z[right], max_terms, with_cond=True)
        out[right] = v
        err[right] = c
    if with_error:
        return out, _EPS * err
    return out


def _asymptotic_sum(p: complex, q: complex, w: np.ndarray, max_terms: int):
    """Sum_s (p)_s (q)_s / s! w^s to its smallest term.  Returns (sum, error)."""
    total = np.ones_like(w)
    term = np.ones_like(w)
    err = np.zeros(w.shape)
    active = np.ones(w.shape, dtype=bool)
    for s in range(max_terms):
        nxt = term * ((p + s) * (q + s) / (s + 1.0)) * w
        growing = np.abs(nxt) >= np.abs(term)
        stop = active & growing & (nxt != 0)
        err = np.where(stop, np.abs(term), err)
        active &= ~stop
        total = np.where(active, total + nxt, total)
        term = np.where(active, nxt, term)
        finished = active & ((np.abs(nxt) <= 0.25 * _EPS * np.abs(total)) | (nxt == 0))
        err = np.where(finished, np.abs(nxt), err)
        active &= ~finished
        if not active.any():
            return total, err
    err = np.where(active, np.abs(term), err)
    return total, err


def _asymptotic_right(a: complex, b: complex, z: np.ndarray, max_terms: int):
    """Large-|z| expansion for Re z >= 0.  Returns (value, relative error)."""
    log_z = np.log(z)
    gb = gamma_fn(b)
    ra = rgamma(a)
    rba = rgamma(b - a)
    s1, e1 = _asymptotic_sum(b - a, 1.0 - a, 1.0 / z, max_terms)
    s2, e2 = _asymptotic_sum(a, a - b + 1.0, -1.0 / z, max_terms)
    dominant = gb * ra * np.exp(z + (a - b) * log_z)
    # Stokes multiplier: the two one-sided continuations average on the real axis
    phase = np.where(
        z.imag > 0,
        cmath.exp(1j * math.pi * a),
        np.where(z.imag < 0, cmath.exp(-1j * math.pi * a), cmath.cos(math.pi * a)),
    )
    recessive = gb * rba * phase * np.exp(-a * log_z)
    value = dominant * s1 + recessive * s2
    abs_err = np.abs(dominant) * e1 + np.abs(recessive) * e2
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(value != 0, abs_err / np.abs(value), np.where(abs_err == 0, 0.0, np.inf))
    return value, rel


def _asymptotic(a, b, z, max_terms, series_terms, rtol, fallback=True):
    """Expansion with optional per-element series fallback.

    Without ``fallback`` returns (value, relative error estimate).
    """
    out = np.empty_like(z)
    rel = np.zeros(z.shape)
    left = z.real < 0
    if left.any():
        zl = z[left]
        v, r = _asymptotic_right(b - a, b, -zl, max_terms)
        out[left] = np.exp(zl) * v
        rel[left] = r
    right = ~left
    if right.any():
        v, r = _asymptotic_right(a, b, z[right], max_terms)
        out[right] = v
        rel[right] = r
    if fallback:
        bad = rel > rtol
        if bad.any():
            sv, serr = _series(a, b, z[bad], series_terms, with_error=True)
            better = serr < rel[bad]
            idx = np.flatnonzero(bad)[better]
            out[idx] = sv[better]
        return out
    return out, rel


def _extended(a, b, z, dps):
    import mpmath

    with mpmath.workdps(dps):
        flat = [complex(mpmath.hyp1f1(a, b, zz)) for zz in z.ravel()]
    return np.asarray(flat, dtype=complex).reshape(z.shape)


def hyp1f1(
    a: complex,
    b: complex,
    z,
    *,
    method: str = "auto",
    switch: float = config.SERIES_SWITCH_ABS_Z,
    max_abs_z: float = config.MAX_ABS_Z,
    extended: bool = config.EXTENDED_PRECISION,
):
    """Vectorized 1F1(a, b; z).  ``method`` is "auto", "series" or "asymptotic"."""
    a = complex(a)
    b = complex(b)
    if _near_non_positive_integer(b):
        raise PoleAtB(f"1F1 is undefined for b={b}")
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(zz) > max_abs_z):
        raise RangeExceeded(f"|z| exceeds the validated range {max_abs_z}")
    if extended:
        out = _extended(a, b, zz, config.EXTENDED_PRECISION_DPS)
    elif method == "series":
        out = _series(a, b, zz, config.SERIES_MAX_TERMS)
    elif method == "asymptotic":
        out, _ = _asymptotic(
            a, b, zz, config.ASYMPTOTIC_MAX_TERMS, config.SERIES_MAX_TERMS,
            config.ASYMPTOTIC_RTOL, fallback=False,
        )
    elif method == "auto":
        out = np.empty_like(zz)
        small = np.abs(zz) <= switch
        if small.any():
            sv, serr = _series(a, b, zz[small], config.SERIES_MAX_TERMS, with_error=True)
            # near the imaginary axis the series cancels; try the expansion there
            poor = (serr > config.ASYMPTOTIC_RTOL) & (np.abs(zz[small]) > 1.0)
            if poor.any():
                av, arel = _asymptotic(
                    a, b, zz[small][poor], config.ASYMPTOTIC_MAX_TERMS,
                    config.SERIES_MAX_TERMS, config.ASYMPTOTIC_RTOL, fallback=False,
                )
                use = arel < serr[poor]
                idx = np.flatnonzero(poor)[use]
                sv[idx] = av[use]
            out[small] = sv
        if (~small).any():
            out[~small] = _asymptotic(
                a, b, zz[~small], config.ASYMPTOTIC_MAX_TERMS,
                config.SERIES_MAX_TERMS, config.ASYMPTOTIC_RTOL,
            )
    else:
        raise ValueError(f"unknown method {method!r}")
    _require_finite(out, "1F1")
    return complex(out[0]) if scalar else out


def kummer_1f1(p: KummerParams, **kwargs):
    """1F1(p.a, p.b; p.z).  See :func:`hyp1f1` for keyword options."""
    return hyp1f1(p.a, p.b, p.z, **kwargs)


def kummer_1f1_jet(p: KummerParams, order: int, **kwargs) -> list:
    """[1F1, d/dz 1F1, ..., d^order/dz^order 1F1] at ``p.z`` (order <= 4).

    Uses d^m/dz^m 1F1(a, b; z) = (a)_m / (b)_m * 1F1(a + m, b + m; z).
    """
    if not 0 <= order <= 4:
        raise ValueError("jet order must be between 0 and 4")
    jet = []
    coef = 1.0 + 0j
    for m in range(order + 1):
        if m:
            coef *= (p.a + m - 1) / (p.b + m - 1)
        if coef == 0:
            jet.append(coef * np.zeros_like(np.asarray(p.z, dtype=complex)) if np.ndim(p.z) else 0j)
            continue
        jet.append(coef * hyp1f1(p.a + m, p.b + m, p.z, **kwargs))
    return jet
