"""Curvature-scale holonomy operators on the real-frequency algebra.

The central object is the frequency relation

    |alpha + beta| * (alpha - beta)^2 = C,      alpha > beta, alpha != -beta,

with C the area constant.  Equivalently alpha - beta = step((alpha+beta)/2)
where step(m) = sqrt(C / (2 |m|)).  For each beta the relation has one or
three solutions alpha; substituting d = alpha - beta > 0 splits it into two
cubics,

    branch plus:   d^3 + 2 beta d^2 - C = 0            (alpha + beta > 0),
    branch minus:  d^3 + 2 beta d^2 + C = 0, d < -2 beta  (alpha + beta < 0),

solved in closed form and polished by Newton steps on the branch cubic.
The count changes from one to three at the tangency point of the minus
branch, beta_crit = -(27 C / 32)^(1/3).

The operator built from the solution sets, its adjoint (the transposed
relation), the sine/cosine combinations, a small-frequency regularization
with a concave cap, and a unitary shift acting additively on the signed
3/2-power coordinate all live here, together with graph sampling used by
the command line tools.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from .cyl import (
    EPS_FREQ,
    REAL,
    CylFunction,
    FrequencyKindError,
    add,
    build,
    freq_eq,
    scale,
)
from .weyl import Symbol

DEFAULT_AREA = 3.0 * math.sqrt(3.0)

BRANCH_PLUS = "outer-plus"
BRANCH_MINUS = "outer-minus"
BRANCH_INNER = "inner"


class ConcavityError(ValueError):
    """A custom regularization cap failed the concavity/positivity check."""


@dataclass(frozen=True)
class MubarScheme:
    """Fixes the area constant C of the frequency relation."""

    area_constant: float = DEFAULT_AREA

    def __post_init__(self):
        if not (self.area_constant > 0):
            raise ValueError("area constant must be positive")


def mubar(scheme: MubarScheme, mu: float) -> float:
    """Frequency step sqrt(C / (2|mu|)); diverges at mu = 0."""
    if mu == 0:
        raise ValueError("step function is undefined at frequency 0")
    return math.sqrt(scheme.area_constant / (2.0 * abs(mu)))


def critical_beta(scheme: MubarScheme) -> float:
    """Tangency point of the minus branch: -(27 C / 32)^(1/3)."""
    return -((27.0 * scheme.area_constant / 32.0) ** (1.0 / 3.0))


def eq_residual(scheme: MubarScheme, alpha: float, beta: float) -> float:
    """Defect |alpha + beta| (alpha - beta)^2 - C of the frequency relation."""
    return abs(alpha + beta) * (alpha - beta) ** 2 - scheme.area_constant


# ---------------------------------------------------------------------------
# cubic machinery


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _depressed_real_roots(p: float, q: float) -> List[float]:
    """Real roots of t^3 + p t + q = 0."""
    if p == 0.0 and q == 0.0:
        return [0.0]
    disc = 0.25 * q * q + p * p * p / 27.0
    if disc > 0.0:
        s = math.sqrt(disc)
        return [_cbrt(-0.5 * q + s) + _cbrt(-0.5 * q - s)]
    if disc == 0.0:
        # q != 0 here, so p != 0: one simple and one double real root
        return sorted({3.0 * q / p, -1.5 * q / p})
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)
    arg = min(1.0, max(-1.0, arg))
    theta = math.acos(arg) / 3.0
    return sorted(m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3))


def _polished_cubic_roots(two_b: float, c0: float) -> List[float]:
    """Real roots of d^3 + two_b d^2 + c0 = 0, Newton-polished."""
    p = -two_b * two_b / 3.0
    q = 2.0 * two_b ** 3 / 27.0 + c0
    roots = [t - two_b / 3.0 for t in _depressed_real_roots(p, q)]
    polished = []
    for d in roots:
        scale_ = max(1.0, abs(d) ** 3, abs(two_b) * d * d, abs(c0))
        for _ in range(40):
            g = d * d * d + two_b * d * d + c0
            gp = 3.0 * d * d + 2.0 * two_b * d
            if abs(g) <= 1e-15 * scale_ or abs(gp) <= 1e-8 * max(1.0, abs(d)):
                break
            step = g / gp
            d -= step
            if abs(step) <= 1e-16 * max(1.0, abs(d)):
                break
        polished.append(d)
    return polished


def _branch_roots(C: float, gamma: float) -> Tuple[List[float], List[float]]:
    """Positive roots of the plus cubic, and minus-cubic roots in (0, -2 gamma).

    Both cubics are d^3 + 2 gamma d^2 + c0 with c0 = -C and +C; the side
    constraints make the sign of alpha + beta definite on each branch.
    """
    plus = [d for d in _polished_cubic_roots(2.0 * gamma, -C) if d > 0.0]
    minus = [d for d in _polished_cubic_roots(2.0 * gamma, C)
             if 0.0 < d < -2.0 * gamma]
    return plus, minus


@dataclass(frozen=True)
class SolutionSet:
    """Solutions alpha of the frequency relation at fixed beta (or fixed alpha).

    branches holds one tag per solution: outer-plus / outer-minus for the
    two cubic branches, inner for capped small-frequency solutions of a
    regularized relation.
    """

    beta: float
    alphas: Tuple[float, ...]
    branches: Tuple[str, ...]

    def count(self) -> int:
        return len(self.alphas)


def _assemble(beta: float, tagged: List[Tuple[float, str]]) -> SolutionSet:
    tagged.sort()
    deduped: List[Tuple[float, str]] = []
    for a, tag in tagged:
        if deduped and abs(a - deduped[-1][0]) <= 1e-9 * max(1.0, abs(a)):
            continue
        deduped.append((a, tag))
    return SolutionSet(beta,
                       tuple(a for a, _ in deduped),
                       tuple(t for _, t in deduped))


def solve_S(scheme: MubarScheme, beta: float) -> SolutionSet:
    """All solutions alpha of the frequency relation at this beta."""
    C = scheme.area_constant
    plus, minus = _branch_roots(C, beta)
    tagged = [(beta + d, BRANCH_PLUS) for d in plus]
    tagged += [(beta + d, BRANCH_MINUS) for d in minus]
    return _assemble(beta, tagged)


def solve_S_adjoint(scheme: MubarScheme, alpha: float) -> SolutionSet:
    """All beta with alpha in the solution set of beta: the transposed relation.

    Substituting gamma = -alpha turns the transposed constraints into the
    same two cubics; the branch tags still report the sign of alpha + beta.
    """
    C = scheme.area_constant
    plus, minus = _branch_roots(C, -alpha)
    tagged = [(alpha - d, BRANCH_MINUS) for d in plus]
    tagged += [(alpha - d, BRANCH_PLUS) for d in minus]
    return _assemble(alpha, tagged)


# ---------------------------------------------------------------------------
# operators on real-kind functions


def _require_real(psi: CylFunction) -> None:
    if psi.kind != REAL:
        raise FrequencyKindError(
            "holonomy operators act on real-kind functions; promote first")


def _relabel_apply(psi: CylFunction, images: Callable[[float], Sequence[float]]) -> CylFunction:
    _require_real(psi)
    items = []
    for beta, coef in sorted(psi.terms.items()):
        for alpha in images(float(beta)):
            items.append((alpha, coef))
    return build(REAL, items, psi.eps_freq, psi.eps_coeff)


def e_apply(scheme: MubarScheme, psi: CylFunction) -> CylFunction:
    """The holonomy operator: each character spreads onto its solution set."""
    return _relabel_apply(psi, lambda b: solve_S(scheme, b).alphas)


def e_adjoint_apply(scheme: MubarScheme, psi: CylFunction) -> CylFunction:
    return _relabel_apply(psi, lambda a: solve_S_adjoint(scheme, a).alphas)


def sin_apply(scheme: MubarScheme, psi: CylFunction) -> CylFunction:
    """Antihermitian part over 2i: (e - e_adjoint) / 2i."""
    diff = add(e_apply(scheme, psi), scale(e_adjoint_apply(scheme, psi), -1.0))
    return scale(diff, -0.5j)


def cos_apply(scheme: MubarScheme, psi: CylFunction) -> CylFunction:
    """Hermitian part: (e + e_adjoint) / 2."""
    return scale(add(e_apply(scheme, psi), e_adjoint_apply(scheme, psi)), 0.5)


# ---------------------------------------------------------------------------
# regularization by a concave cap on small frequencies


def _validate_cap(f: Callable[[float], float], eps: float) -> None:
    n = 1000
    xs = [-eps + 2.0 * eps * k / n for k in range(n + 1)]
    vals = [float(f(x)) for x in xs]
    scale_ = max(abs(v) for v in vals)
    for v in vals:
        if not (v > 0.0):
            raise ConcavityError("cap must be strictly positive on the window")
    for k in range(0, n - 1):
        mid = vals[k + 1]
        if mid < 0.5 * (vals[k] + vals[k + 2]) - 1e-12 * max(1.0, scale_):
            raise ConcavityError("cap failed the midpoint concavity check")


@dataclass(frozen=True)
class Regularization:
    """Replaces the step function by a concave cap on [-epsilon, epsilon].

    cap_fn None means the constant cap equal to the step value at the
    window edge, which keeps the capped relation continuous.
    """

    epsilon: float
    cap_fn: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if not (self.epsilon > 0):
            raise ValueError("epsilon must be positive")
        if self.cap_fn is not None:
            _validate_cap(self.cap_fn, self.epsilon)


def cap_value(scheme: MubarScheme, reg: Regularization, m: float) -> float:
    """The capped step function at midpoint m."""
    if abs(m) <= reg.epsilon:
        if reg.cap_fn is None:
            return mubar(scheme, reg.epsilon)
        return float(reg.cap_fn(m))
    return mubar(scheme, m)


def _window_roots(g: Callable[[float], float], eps: float, n: int = 2000) -> List[float]:
    """Roots of g on [-eps, eps] by scan and bisection; g is continuous."""
    xs = [-eps + 2.0 * eps * k / n for k in range(n + 1)]
    vals = [g(x) for x in xs]
    roots = []
    for k in range(n):
        a, b, fa, fb = xs[k], xs[k + 1], vals[k], vals[k + 1]
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb < 0.0:
            for _ in range(100):
                m = 0.5 * (a + b)
                fm = g(m)
                if fm == 0.0:
                    a = b = m
                    break
                if fa * fm < 0.0:
                    b = m
                else:
                    a, fa = m, fm
                if b - a <= 1e-15 * max(1.0, abs(m)):
                    break
            roots.append(0.5 * (a + b))
    if vals[n] == 0.0:
        roots.append(xs[n])
    return roots


def _inner_solutions(scheme: MubarScheme, reg: Regularization, beta: float,
                     transposed: bool) -> List[float]:
    """Capped-window solutions: alpha - beta = cap((alpha+beta)/2), |alpha+beta| <= 2 eps.

    transposed solves for beta at fixed alpha instead (the argument then
    plays the role of alpha).
    """
    eps = reg.epsilon
    if reg.cap_fn is None:
        cap = mubar(scheme, eps)
        if transposed:
            # beta = alpha - cap, needs |2 alpha - cap| <= 2 eps
            return [beta - cap] if abs(2.0 * beta - cap) <= 2.0 * eps else []
        return [beta + cap] if abs(2.0 * beta + cap) <= 2.0 * eps else []
    f = reg.cap_fn
    if transposed:
        g = lambda s: float(f(s)) - 2.0 * (beta - s)
        return [2.0 * s - beta for s in _window_roots(g, eps)]
    g = lambda s: float(f(s)) - 2.0 * (s - beta)
    return [2.0 * s - beta for s in _window_roots(g, eps)]


def regularized_solutions(scheme: MubarScheme, reg: Regularization,
                          beta: float) -> SolutionSet:
    """Solution set of the capped relation: outer part plus window part.

    Outer solutions are the uncapped ones with |alpha + beta| strictly
    above 2 epsilon; the window contributes at most two more (concavity),
    so counts never exceed five.
    """
    eps = reg.epsilon
    base = solve_S(scheme, beta)
    tagged = [(a, t) for a, t in zip(base.alphas, base.branches)
              if abs(a + beta) > 2.0 * eps]
    tagged += [(a, BRANCH_INNER) for a in _inner_solutions(scheme, reg, beta, False)]
    return _assemble(beta, tagged)


def regularized_adjoint_solutions(scheme: MubarScheme, reg: Regularization,
                                  alpha: float) -> SolutionSet:
    eps = reg.epsilon
    base = solve_S_adjoint(scheme, alpha)
    tagged = [(b, t) for b, t in zip(base.alphas, base.branches)
              if abs(alpha + b) > 2.0 * eps]
    tagged += [(b, BRANCH_INNER) for b in _inner_solutions(scheme, reg, alpha, True)]
    return _assemble(alpha, tagged)


def e_regularized_apply(scheme: MubarScheme, reg: Regularization,
                        psi: CylFunction) -> CylFunction:
    return _relabel_apply(psi, lambda b: regularized_solutions(scheme, reg, b).alphas)


# ---------------------------------------------------------------------------
# strong-convergence bookkeeping


@dataclass(frozen=True)
class ConvergenceReport:
    """Stabilization record of the regularized operator on one character.

    stable_index is the first 1-based position N in the epsilon sequence
    with set equality from there on (None if it never stabilizes in the
    tested range); spurious lists, for each earlier position, the capped
    solutions lying in the shrinking window |alpha + beta| <= 2 epsilon.
    """

    beta: float
    epsilons: Tuple[float, ...]
    stable_index: Optional[int]
    spurious: Tuple[Tuple[float, ...], ...]


def _sets_match(a: Sequence[float], b: Sequence[float], tol: float = 1e-9) -> bool:
    if len(a) != len(b):
        return False
    return all(abs(x - y) <= tol * max(1.0, abs(x), abs(y))
               for x, y in zip(sorted(a), sorted(b)))


def convergence_check(scheme: MubarScheme, beta: float,
                      epsilons: Sequence[float]) -> ConvergenceReport:
    base = solve_S(scheme, beta).alphas
    sets = []
    windows = []
    for eps in epsilons:
        reg = Regularization(eps)
        sol = regularized_solutions(scheme, reg, beta)
        sets.append(sol.alphas)
        windows.append(tuple(a for a in sol.alphas
                             if abs(a + beta) <= 2.0 * eps + 1e-12))
    flags = [_sets_match(base, s) for s in sets]
    stable = None
    for i, ok in enumerate(flags):
        if ok and all(flags[i:]):
            stable = i + 1
            break
    upto = (stable - 1) if stable is not None else len(epsilons)
    return ConvergenceReport(beta, tuple(float(e) for e in epsilons),
                             stable, tuple(windows[:upto]))


# ---------------------------------------------------------------------------
# unitary shift in the signed 3/2-power coordinate


def volume_coordinate(mu: float) -> float:
    """Signed 3/2 power: sign(mu) |mu|^(3/2); strictly increasing bijection."""
    return math.copysign(abs(mu) ** 1.5, mu)


def volume_inverse(v: float) -> float:
    # cube root (one Newton polish) then square; keeps perfect cubes exact,
    # unlike a direct abs(v) ** (2/3)
    a = abs(v)
    if a == 0.0:
        return 0.0
    r = a ** (1.0 / 3.0)
    r = (2.0 * r + a / (r * r)) / 3.0
    return math.copysign(r * r, v)


def _shift_check(K) -> float:
    K = float(K)
    if not (K > 0):
        raise ValueError("the shift constant must be a positive number")
    return K


def aps_apply(K, psi: CylFunction) -> CylFunction:
    """Unitary relabeling: each frequency moves down by 1/K in the 3/2 coordinate.

    The coefficient at alpha of the image reads the input at the unique
    beta with volume_coordinate(beta) - 1/K = volume_coordinate(alpha).
    """
    K = _shift_check(K)
    return _relabel_apply(
        psi, lambda b: (volume_inverse(volume_coordinate(b) - 1.0 / K),))


def aps_adjoint_apply(K, psi: CylFunction) -> CylFunction:
    """Inverse (= adjoint) of the unitary shift: moves up by 1/K."""
    K = _shift_check(K)
    return _relabel_apply(
        psi, lambda b: (volume_inverse(volume_coordinate(b) + 1.0 / K),))


# ---------------------------------------------------------------------------
# symbols for the norm machinery


def holonomy_symbol(scheme: MubarScheme, eps_freq: float = EPS_FREQ) -> Symbol:
    """Operational symbol of the holonomy operator.

    Row and column counts are bounded by 3 (one or three solutions), so
    the Schur constants are declared as (3, 3).
    """
    def fourier(nu, mu):
        m = float(mu)
        if m == 0.0:
            return 0j
        return 1.0 + 0j if freq_eq(nu, mubar(scheme, m), eps_freq) else 0j

    return Symbol(
        name="e",
        fourier=fourier,
        row_support=lambda a: solve_S_adjoint(scheme, float(a)).alphas,
        col_support=lambda b: solve_S(scheme, float(b)).alphas,
        kind=REAL,
        schur_row=3.0,
        schur_col=3.0,
        eps_freq=eps_freq,
    )


def regularized_symbol(scheme: MubarScheme, reg: Regularization,
                       eps_freq: float = EPS_FREQ) -> Symbol:
    """Symbol of the capped operator; counts stay at most 5, so (5, 5)."""
    def fourier(nu, mu):
        return 1.0 + 0j if freq_eq(nu, cap_value(scheme, reg, float(mu)), eps_freq) else 0j

    return Symbol(
        name=f"e_reg:{reg.epsilon}",
        fourier=fourier,
        row_support=lambda a: regularized_adjoint_solutions(scheme, reg, float(a)).alphas,
        col_support=lambda b: regularized_solutions(scheme, reg, float(b)).alphas,
        kind=REAL,
        schur_row=5.0,
        schur_col=5.0,
        eps_freq=eps_freq,
    )


def aps_symbol(K, eps_freq: float = EPS_FREQ) -> Symbol:
    """Symbol of the unitary shift; a single entry per row and column."""
    K = _shift_check(K)

    def fourier(nu, mu):
        alpha = float(mu) + float(nu) / 2.0
        beta = float(mu) - float(nu) / 2.0
        image = volume_inverse(volume_coordinate(beta) - 1.0 / K)
        return 1.0 + 0j if freq_eq(alpha, image, eps_freq) else 0j

    return Symbol(
        name=f"e_aps:{K}",
        fourier=fourier,
        row_support=lambda a: (volume_inverse(volume_coordinate(float(a)) + 1.0 / K),),
        col_support=lambda b: (volume_inverse(volume_coordinate(float(b)) - 1.0 / K),),
        kind=REAL,
        schur_row=1.0,
        schur_col=1.0,
        eps_freq=eps_freq,
    )


# ---------------------------------------------------------------------------
# graph sampling


@dataclass(frozen=True)
class GraphPoint:
    operator: str
    alpha: float
    beta: float
    branch: str


def _linspace(lo: float, hi: float, n: int) -> List[float]:
    if n < 2:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def graph_points_e(scheme: MubarScheme, lo: float, hi: float,
                   n: int) -> List[GraphPoint]:
    """Holonomy graph data: the parametrized curve plus per-beta solutions.

    The curve point at midpoint parameter x is (x + step(x)/2, x - step(x)/2),
    which satisfies the frequency relation identically; the per-beta rows
    tag each solution with its cubic branch.
    """
    pts = []
    for x in _linspace(lo, hi, n):
        if x == 0.0:
            continue
        s = mubar(scheme, x)
        pts.append(GraphPoint("e", x + 0.5 * s, x - 0.5 * s, "curve"))
    for b in _linspace(lo, hi, n):
        sol = solve_S(scheme, b)
        for a, tag in zip(sol.alphas, sol.branches):
            pts.append(GraphPoint("e", a, b, tag))
    return pts


def graph_points_aps(K, lo: float, hi: float, n: int) -> List[GraphPoint]:
    K = _shift_check(K)
    return [
        GraphPoint("e_aps", volume_inverse(volume_coordinate(b) - 1.0 / K), b, "curve")
        for b in _linspace(lo, hi, n)
    ]


def graph_points_character(mu0: float, lo: float, hi: float,
                           n: int) -> List[GraphPoint]:
    """Graph of the pure frequency shift: the line alpha = beta + mu0."""
    return [GraphPoint("h", b + mu0, b, "line") for b in _linspace(lo, hi, n)]
