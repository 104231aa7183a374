"""Polynomial Heisenberg algebra layer: ladder operators of H_k and their checks.

The ladder operators are L^{+-} = B_k^+ a^{+-} B_k^-, applied as a chain of
first-order factors on Taylor series.  For k = 1 this is A_1^+ a^{+-} A_1^-,
a third-order operator, and L^+ L^- = Q(H) with the three roots
{eps1, 1/2, eps1 + 1}.  For k >= 2 the same natural construction has order
2k + 1 and

    Q(E) = (E - 1/2) prod_j (E - eps_j)(E - eps_j - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import config
from . import taylor
from .errors import InsufficientOrder, NotDegenerate
from .painleve import PIVParams, PIVSolutionSample
from .seed_solutions import SQRT2, SeedSpec, ValueJet
from .susy_transform import (
    OperatorFactor,
    Samples,
    _check_regular,
    apply_factor_taylor,
    b_minus_taylor,
    b_plus_taylor,
    mapped_taylor,
    new_level_taylor,
    partner_potential,
    seed_chain,
    superpotentials,
)

RAISE = "raise"
LOWER = "lower"


@dataclass(frozen=True)
class PHATriple:
    """f, h and the potential v of the decoupled system, at x."""

    x: np.ndarray
    f: np.ndarray
    h: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class QPolynomial:
    """Q(E) = prod (E - E_i); ``order`` is m = number of roots - 1."""

    roots: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.roots) - 1

    def __call__(self, e):
        e = np.asarray(e, dtype=float)
        out = np.ones_like(e)
        for r in self.roots:
            out = out * (e - r)
        return out

    def p(self, e):
        """P_m(E) = Q(E + 1) - Q(E), so that [L^-, L^+] = P_m(H)."""
        return self(np.asarray(e, dtype=float) + 1.0) - self(e)


@dataclass(frozen=True)
class SpectrumDescriptor:
    infinite_ladder_base: float
    finite_ladder: list[float]
    degenerate_overlap: int | None = None

    def infinite_levels(self, count: int = 10) -> list[float]:
        return [self.infinite_ladder_base + n for n in range(count)]


@dataclass(frozen=True)
class State:
    """An eigenstate of H_k given by its Taylor series at arbitrary points.

    ``series(x, n)`` returns the order-n series at x.  ``ladder`` is
    "infinite" or "finite".
    """

    energy: float
    series: Callable[[np.ndarray, int], np.ndarray] = field(repr=False)
    label: str = ""
    ladder: str = "infinite"


# -- (f, h, V) ---------------------------------------------------------------


def fhv_from_g(sample: PIVSolutionSample, params: PIVParams, e1: float) -> PHATriple:
    """f = x + g, h = -x^2 + g'/2 - g^2/2 - 2xg + a,
    v = x^2/2 - g'/2 + g^2/2 + xg + e1 - 1/2."""
    x = np.asarray(sample.x, dtype=float)
    g, g1 = np.asarray(sample.g), np.asarray(sample.g1)
    a = float(params.a)
    f = x + g
    h = -x * x + 0.5 * g1 - 0.5 * g * g - 2.0 * x * g + a
    v = 0.5 * x * x - 0.5 * g1 + 0.5 * g * g + x * g + e1 - 0.5
    return PHATriple(x=x, f=f, h=h, v=v)


# -- operators ---------------------------------------------------------------


def apply_first_order(factor: OperatorFactor, f_jet: ValueJet):
    """(1/sqrt2)(-+f' + alpha f) at the jet's x."""
    if f_jet.order < 1:
        raise InsufficientOrder("first-order operator needs f'")
    alpha = factor.alpha(f_jet.x)
    return (factor.sign * f_jet.values[1] + alpha * f_jet.values[0]) / SQRT2


def _oscillator_factor(x, direction, n):
    xs = taylor.variable(x, n)
    return lambda f: apply_factor_taylor(xs, f, direction)


def ladder_taylor(spec: SeedSpec, direction: str, f: np.ndarray, x) -> np.ndarray:
    """Series of L^{+-} f; the result has order len(f) - 1 - (2k + 1)."""
    if direction not in (RAISE, LOWER):
        raise ValueError("direction must be 'raise' or 'lower'")
    x = np.asarray(x, dtype=float)
    n = len(f) - 1
    if n < 2 * spec.k + 1:
        raise InsufficientOrder(f"ladder operator of order {2 * spec.k + 1} needs a jet of that order")
    _check_regular(seed_chain(spec, x, spec.k + 1), "W(u_1..u_k)")
    alphas = superpotentials(spec, x, n)
    g = b_minus_taylor(alphas, f)
    g = _oscillator_factor(x, direction, n)(g)
    return b_plus_taylor(alphas, g)


def _series_of(state, x, n):
    if isinstance(state, State):
        return state.series(x, n)
    if isinstance(state, ValueJet):
        return state.taylor
    return np.asarray(state)


def apply_ladder(spec: SeedSpec, direction: str, state, grid) -> Samples:
    """L^{+-} applied to a state (a :class:`State`, a ValueJet or a Taylor
    series array of order >= 2k + 1 at the grid points)."""
    x = np.asarray(grid, dtype=float)
    f = _series_of(state, x, 2 * spec.k + 1)
    return Samples(x=x, values=ladder_taylor(spec, direction, f, x)[0])


def q_polynomial(spec: SeedSpec) -> QPolynomial:
    roots = [0.5]
    for eps in spec.energies:
        roots += [eps, eps + 1.0]
    return QPolynomial(tuple(sorted(roots)))


def spectrum(spec: SeedSpec) -> SpectrumDescriptor:
    finite = [spec.epsilon1 - (spec.k - 1) + i for i in range(spec.k)]
    j = spec.epsilon1 - 0.5
    overlap = int(round(j)) if j >= -config.POLE_TOL and abs(j - round(j)) < config.POLE_TOL else None
    return SpectrumDescriptor(infinite_ladder_base=0.5, finite_ladder=finite, degenerate_overlap=overlap)


# -- states --------------------------------------------------------------------


def mapped_state(spec: SeedSpec, n_level: int, normalized: bool = True) -> State:
    return State(
        energy=n_level + 0.5,
        series=lambda x, n: mapped_taylor(spec, n_level, x, n, normalized=normalized),
        label=f"mapped n={n_level}",
    )


def new_level_state(spec: SeedSpec, j: int) -> State:
    return State(
        energy=spec.epsilon1 - (j - 1),
        series=lambda x, n: new_level_taylor(spec, j, x, n),
        label=f"new level j={j}",
        ladder="finite",
    )


def basket(spec: SeedSpec, n_max: int = 4) -> list[State]:
    """Mapped states n = 0..n_max (non-degenerate ones) and the k new levels."""
    out = []
    for n in range(n_max + 1):
        if any(abs(n + 0.5 - e) < config.POLE_TOL for e in spec.energies):
            continue
        out.append(mapped_state(spec, n))
    out += [new_level_state(spec, j) for j in range(1, spec.k + 1)]
    return out


# -- numeric certificates ------------------------------------------------------


def _stencil2(fn, x, h):
    vals = [fn(x + s * h) for s in (-2, -1, 0, 1, 2)]
    return (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12.0 * h * h)


def _scale(*arrays):
    return max(float(np.max(np.abs(a))) for a in arrays) or 1.0


def annihilation_measure(image, preimage) -> float:
    """max |L psi| relative to max |psi|."""
    return float(np.max(np.abs(image)) / np.max(np.abs(preimage)))


def proportionality_measure(image, target, mask_rtol: float = config.RATIO_MASK_RTOL) -> float:
    """Relative spread of the pointwise ratio image/target where |target|
    exceeds ``mask_rtol`` times its maximum.  The reference constant is the
    least-squares fit over the same points."""
    image, target = np.asarray(image), np.asarray(target)
    mask = np.abs(target) > mask_rtol * np.max(np.abs(target))
    t, m = target[mask], image[mask]
    c = np.vdot(t, m) / np.vdot(t, t)
    if c == 0:
        return math.inf
    return float(np.max(np.abs(m / t - c)) / abs(c))


def overlap(f, g, x) -> complex:
    from scipy.integrate import simpson

    return complex(simpson(np.conj(f) * g, x=x))


@dataclass
class StateCheck:
    label: str
    energy: float
    ladder: str
    commutator: dict[str, float]
    commutator_exact: dict[str, float]
    q_deviation: float


@dataclass
class PHAReport:
    q: QPolynomial
    states: list[StateCheck]
    p_values: dict[float, float]
    separation: float

    @property
    def commutator_deviation(self) -> float:
        return max(max(s.commutator.values()) for s in self.states)

    @property
    def commutator_exact_deviation(self) -> float:
        return max(max(s.commutator_exact.values()) for s in self.states)

    @property
    def q_deviation(self) -> float:
        return max(s.q_deviation for s in self.states)


def pha_checks(spec: SeedSpec, grid, n_max: int = 4, h: float = config.FD_STEP) -> PHAReport:
    """Numeric certificates of the ladder algebra on a basket of eigenstates.

    * commutator: max |H_k L psi - (E +- 1) L psi| relative to
      max(|L psi|, |psi|), with H_k applied by 5-point differences
      (``commutator``) and by exact series (``commutator_exact``);
    * Q factorization: max |L^+ L^- psi - Q(E) psi| relative to
      max(1, |Q(E)|) max |psi|;
    * P values Q(E + 1) - Q(E) at the basket energies;
    * two-ladder separation: largest overlap of L^{+-}(finite-ladder state)
      with infinite-ladder states, relative to the norms of the pre-images.
    """
    x = np.asarray(grid, dtype=float)
    k = spec.k
    order = 2 * k + 1
    q = q_polynomial(spec)
    v = partner_potential(spec, x)
    states = basket(spec, n_max)
    checks = []
    images = {}
    for st in states:
        psi = st.series(x, 2 * order)
        comm, comm_exact = {}, {}
        for direction, shift in ((RAISE, 1.0), (LOWER, -1.0)):
            img = ladder_taylor(spec, direction, psi[: order + 3], x)
            images[(st.label, direction)] = img[0]
            scale = _scale(img[0], psi[0])

            def fn(t, direction=direction):
                return ladder_taylor(spec, direction, st.series(t, order), t)[0]

            d2 = _stencil2(fn, x, h)
            e = st.energy + shift
            comm[direction] = float(np.max(np.abs(-0.5 * d2 + (v - e) * img[0])) / scale)
            exact = -img[2] + (v - e) * img[0]  # img[2] = f''/2
            comm_exact[direction] = float(np.max(np.abs(exact)) / scale)
        lowered = ladder_taylor(spec, LOWER, psi, x)
        both = ladder_taylor(spec, RAISE, lowered, x)
        qe = float(q(st.energy))
        qdev = float(np.max(np.abs(both[0] - qe * psi[0])) / (max(1.0, abs(qe)) * np.max(np.abs(psi[0]))))
        checks.append(StateCheck(st.label, st.energy, st.ladder, comm, comm_exact, qdev))
    p_values = {st.energy: float(q.p(st.energy)) for st in states}
    sep = 0.0
    infinite = [st for st in states if st.ladder == "infinite"]
    for st in states:
        if st.ladder != "finite":
            continue
        pre = st.series(x, 0)[0]
        for direction in (RAISE, LOWER):
            img = images[(st.label, direction)]
            for other in infinite:
                psi = other.series(x, 0)[0]
                num = abs(overlap(psi, img, x))
                den = math.sqrt(abs(overlap(psi, psi, x)) * abs(overlap(pre, pre, x)))
                sep = max(sep, num / den)
    return PHAReport(q=q, states=checks, p_values=p_values, separation=sep)


# -- the degenerate overlap eps1 = E_j ------------------------------------------


@dataclass
class Assertion:
    name: str
    kind: str  # "annihilated", "proportional" or "nonzero-proportional"
    value: float
    threshold: float
    passed: bool
    magnitude: float | None = None


@dataclass
class DegenerateReport:
    j: int
    assertions: list[Assertion]

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)


def degenerate_report_for_spec(
    spec: SeedSpec,
    grid,
    *,
    annihilation_tol: float = config.ANNIHILATION_TOL,
    proportionality_tol: float = config.PROPORTIONALITY_TOL,
    l_max: int | None = None,
) -> DegenerateReport:
    """Ladder connections when eps1 coincides with the oscillator level E_j.

    The states are A_1^+ psi_l (unnormalized: the usual normalization
    vanishes at l = j, where A_1^+ psi_j is proportional to 1/u_1).
    """
    if spec.k != 1:
        raise NotDegenerate("the degenerate classification is defined for k = 1")
    j = spectrum(spec).degenerate_overlap
    if j is None:
        raise NotDegenerate(f"eps1 = {spec.epsilon1} is not an oscillator level")
    if spec.kappa == 0:
        raise ValueError("the degenerate case needs a complex seed (kappa != 0)")
    x = np.asarray(grid, dtype=float)
    order = 3

    def state(l):
        return mapped_taylor(spec, l, x, order, normalized=False)

    def act(direction, l):
        return ladder_taylor(spec, direction, state(l), x)[0]

    seed = seed_chain(spec, x, 2)[0].values[0]
    inv_u = 1.0 / seed
    out = []

    def annihilated(name, direction, l):
        val = annihilation_measure(act(direction, l), state(l)[0])
        out.append(Assertion(name, "annihilated", val, annihilation_tol, val < annihilation_tol))

    def proportional(name, direction, l, target, nonzero=False):
        img = act(direction, l)
        val = proportionality_measure(img, target)
        mag = annihilation_measure(img, state(l)[0])
        ok = val < proportionality_tol
        if nonzero:
            ok = ok and mag > 100 * annihilation_tol
        kind = "nonzero-proportional" if nonzero else "proportional"
        out.append(Assertion(name, kind, val, proportionality_tol, ok, mag))

    l_max = j + 3 if l_max is None else l_max
    for l in range(1, l_max + 1):
        if l == j:
            continue
        proportional(f"L- A+psi_{l} ~ A+psi_{l - 1}", LOWER, l, state(l - 1)[0])
    annihilated(f"L- A+psi_{j} = 0", LOWER, j)
    if j != 0:
        annihilated("L- A+psi_0 = 0", LOWER, 0)
    annihilated(f"L+ A+psi_{j} = 0", RAISE, j)
    proportional(f"L- A+psi_{j + 1} ~ 1/u1", LOWER, j + 1, inv_u, nonzero=True)
    if j >= 1:
        proportional(f"L+ A+psi_{j - 1} ~ 1/u1", RAISE, j - 1, inv_u, nonzero=True)
    return DegenerateReport(j=j, assertions=out)


def degenerate_ladder_classification(j: int, grid, lam: float = 1.0, kappa: float = 1.0, **kw) -> DegenerateReport:
    """The eps1 = E_j = j + 1/2 case with seed constant lam + i kappa."""
    if int(j) != j or j < 0:
        raise ValueError("j must be a non-negative integer")
    return degenerate_report_for_spec(SeedSpec(epsilon1=j + 0.5, lam=lam, kappa=kappa, k=1), grid, **kw)
