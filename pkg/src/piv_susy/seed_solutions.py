"""Seed solutions of the oscillator Schrodinger equation.

Conventions: H0 = -1/2 d^2/dx^2 + x^2/2, so every seed of energy ``eps``
solves u'' = (x^2 - 2 eps) u.  Derivatives beyond the first are always
generated from that recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import config
from . import taylor
from .errors import GammaPole, InsufficientOrder, PoleError, ZeroDenominator
from .special_fns import KummerParams, gamma_fn, kummer_1f1_jet

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SeedSpec:
    """Configuration of a k-th order complex SUSY transformation.

    Give either ``nu`` (real-case parametrization, converted to ``lam`` with
    ``kappa = 0``) or ``lam``/``kappa``, not both.
    """

    epsilon1: float
    lam: float = 0.0
    kappa: float = 0.0
    k: int = 1
    nu: float | None = None

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("transformation order k must be a positive integer")
        if self.k > config.MAX_ORDER_K:
            raise ValueError(f"k > {config.MAX_ORDER_K} is not supported")
        object.__setattr__(self, "k", int(self.k))
        if self.nu is not None:
            if self.lam != 0.0 or self.kappa != 0.0:
                raise ValueError("nu and (lambda, kappa) are mutually exclusive")
            object.__setattr__(self, "lam", nu_to_lambda(self.nu, self.epsilon1))

    @classmethod
    def from_nu(cls, epsilon1: float, nu: float, k: int = 1) -> "SeedSpec":
        return cls(epsilon1=epsilon1, k=k, nu=nu)

    @property
    def constant(self) -> complex:
        """The complex constant lambda + i kappa."""
        return complex(self.lam, self.kappa)

    @property
    def real_regime(self) -> bool:
        """True when epsilon1 < 1/2 (real non-singular seeds are possible)."""
        return self.epsilon1 < 0.5

    @property
    def energies(self) -> list[float]:
        return [self.epsilon1 - j for j in range(self.k)]

    def with_order(self, k: int) -> "SeedSpec":
        return replace(self, k=k, nu=None)


@dataclass(frozen=True)
class ValueJet:
    """A function and its derivatives 0..order at ``x``.

    ``x`` may be an array of sample points; ``values`` then has shape
    ``(order + 1, *x.shape)``.  ``epsilon`` is the Schrodinger energy for
    oscillator solutions and ``None`` for arbitrary test functions.
    """

    x: np.ndarray
    values: np.ndarray = field(repr=False)
    epsilon: float | None = None

    @property
    def order(self) -> int:
        return self.values.shape[0] - 1

    @property
    def taylor(self) -> np.ndarray:
        return taylor.from_derivatives(self.values)

    def __getitem__(self, m):
        return self.values[m]


def schrodinger_jet(x, epsilon: float, v0, v1, order: int) -> ValueJet:
    """Complete a jet from (u, u') using u^(m+2) = d^m[(x^2 - 2 eps) u]."""
    x = np.asarray(x, dtype=float)
    vals = np.zeros((max(order, 1) + 1,) + x.shape, dtype=complex)
    vals[0] = v0
    vals[1] = v1
    q = x * x - 2.0 * epsilon
    for m in range(0, order - 1):
        nxt = q * vals[m]
        if m >= 1:
            nxt = nxt + 2.0 * m * x * vals[m - 1]
        if m >= 2:
            nxt = nxt + m * (m - 1) * vals[m - 2]
        vals[m + 2] = nxt
    return ValueJet(x=x, values=vals[: order + 1], epsilon=epsilon)


def nu_to_lambda(nu: float, epsilon: float) -> float:
    """lambda = 2 nu Gamma((3 - 2 eps)/4) / Gamma((1 - 2 eps)/4)."""
    try:
        num = gamma_fn((3.0 - 2.0 * epsilon) / 4.0)
        den = gamma_fn((1.0 - 2.0 * epsilon) / 4.0)
    except PoleError as exc:
        raise GammaPole(f"nu parametrization undefined at epsilon={epsilon}") from exc
    return 2.0 * nu * (num / den).real


def kummer_form_jet(x, epsilon: float, p: complex, q: complex, order: int) -> ValueJet:
    """Jet of u = exp(-x^2/2) [p 1F1(a, 1/2; x^2) + q x 1F1(a + 1/2, 3/2; x^2)],
    a = (1 - 2 eps)/4: the general oscillator solution of energy ``eps``."""
    if order < 1:
        raise InsufficientOrder("seed jets need order >= 1")
    x = np.asarray(x, dtype=float)
    z = x * x
    a1 = (1.0 - 2.0 * epsilon) / 4.0
    if p != 0:
        m1, dm1 = kummer_1f1_jet(KummerParams(a1, 0.5, z), 1)
    else:
        m1 = dm1 = np.zeros_like(z)
    if q != 0:
        m2, dm2 = kummer_1f1_jet(KummerParams(a1 + 0.5, 1.5, z), 1)
    else:
        m2 = dm2 = np.zeros_like(z)
    gauss = np.exp(-0.5 * z)
    bracket = p * m1 + x * q * m2
    u = gauss * bracket
    du = gauss * (-x * bracket + 2.0 * x * p * dm1 + q * (m2 + 2.0 * z * dm2))
    return schrodinger_jet(x, epsilon, u, du, order)


def ladder_coefficients(epsilon: float, p: complex, q: complex, direction: int):
    """(eps', p', q') of a^{+-} u for u in the Kummer form above.

    Contiguous relations give the action exactly, with no cancellation
    between u and u' on the growing branch:
        (x - d) E(a) = 2 (1 - 2a) O(a),   (x - d) O(a + 1/2) = -E(a - 1/2),
        (x + d) E(a) = 4a O(a + 1),       (x + d) O(a + 1/2) = E(a + 1/2),
    with E(a) = e^{-z/2} M(a, 1/2, z) and O(b) = x e^{-z/2} M(b, 3/2, z).
    """
    a = (1.0 - 2.0 * epsilon) / 4.0
    if direction > 0:
        return epsilon + 1.0, -q / SQRT2, 2.0 * (1.0 - 2.0 * a) * p / SQRT2
    return epsilon - 1.0, q / SQRT2, 4.0 * a * p / SQRT2


def seed_u_jet(x, epsilon: float, lam: float, kappa: float, order: int) -> ValueJet:
    """Jet of the complex seed

        u = exp(-x^2/2) [1F1((1-2e)/4, 1/2; x^2) + x (lam + i kappa) 1F1((3-2e)/4, 3/2; x^2)].
    """
    return kummer_form_jet(x, epsilon, 1.0, complex(lam, kappa), order)


def oscillator_jet(x, n: int, order: int) -> ValueJet:
    """Jet of the normalized oscillator eigenfunction psi_n (energy n + 1/2)."""
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    for m in range(n):
        prev, cur = cur, math.sqrt(2.0 / (m + 1)) * x * cur - math.sqrt(m / (m + 1)) * prev
    dcur = -x * cur + math.sqrt(2.0 * n) * prev
    return schrodinger_jet(x, n + 0.5, cur, dcur, order)


def apply_annihilation(jet: ValueJet) -> ValueJet:
    """Jet of a^- u = (x u + u')/sqrt(2); the energy drops by one."""
    return _apply_oscillator_ladder(jet, -1)


def apply_creation(jet: ValueJet) -> ValueJet:
    """Jet of a^+ u = (x u - u')/sqrt(2); the energy rises by one."""
    return _apply_oscillator_ladder(jet, +1)


def _apply_oscillator_ladder(jet: ValueJet, direction: int) -> ValueJet:
    if jet.order < 1:
        raise InsufficientOrder("ladder action needs a first derivative")
    if jet.epsilon is None:
        raise ValueError("ladder action needs the jet's Schrodinger energy")
    x = jet.x
    v0, v1 = jet.values[0], jet.values[1]
    v2 = jet.values[2] if jet.order >= 2 else (x * x - 2.0 * jet.epsilon) * v0
    s = -float(direction)  # sign of the derivative term
    w0 = (x * v0 + s * v1) / SQRT2
    w1 = (v0 + x * v1 + s * v2) / SQRT2
    return schrodinger_jet(x, jet.epsilon + direction, w0, w1, jet.order)


def build_seed_chain(spec: SeedSpec, x, order: int) -> list[ValueJet]:
    """[u_1, ..., u_k] with u_j = (a^-)^(j-1) u_1 at energies eps1 - (j-1)."""
    if order < spec.k + 1:
        raise InsufficientOrder(f"seed chain for k={spec.k} needs order >= {spec.k + 1}")
    eps, p, q = spec.epsilon1, 1.0 + 0j, spec.constant
    chain = []
    for _ in range(spec.k):
        chain.append(kummer_form_jet(x, eps, p, q, order))
        eps, p, q = ladder_coefficients(eps, p, q, -1)
    return chain


def seed_creation_jet(spec: SeedSpec, x, order: int) -> ValueJet:
    """Jet of a^+ u_1 (energy eps1 + 1)."""
    eps, p, q = ladder_coefficients(spec.epsilon1, 1.0 + 0j, spec.constant, +1)
    return kummer_form_jet(x, eps, p, q, order)


def schrodinger_residual(jet: ValueJet, epsilon: float | None = None) -> np.ndarray:
    """|-u''/2 + x^2 u/2 - eps u| from the jet's own second derivative."""
    eps = jet.epsilon if epsilon is None else epsilon
    if jet.order < 2:
        raise InsufficientOrder("residual needs a second derivative")
    x = jet.x
    return np.abs(-0.5 * jet.values[2] + (0.5 * x * x - eps) * jet.values[0])


def riccati_check(jet: ValueJet) -> float:
    """max |alpha' + alpha^2 - 2(x^2/2 - eps)| with alpha = u'/u."""
    if jet.order < 2:
        raise InsufficientOrder("Riccati check needs a second derivative")
    v0 = jet.values[0]
    if np.any(v0 == 0):
        raise ZeroDenominator("seed vanishes at a sample point")
    alpha = jet.values[1] / v0
    dalpha = jet.values[2] / v0 - alpha * alpha
    x = jet.x
    return float(np.max(np.abs(dalpha + alpha * alpha - (x * x - 2.0 * jet.epsilon))))
