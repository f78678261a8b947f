"""Symmetric (midpoint) quantization of symbols on frequency space.

A symbol is described operationally: a partial-Fourier evaluator
sigma_hat(nu, mu) together with two support enumerators.  The induced
operator acts on a cylindrical function through the matrix

    M[alpha, beta] = sigma_hat(alpha - beta, (alpha + beta)/2),

whose row alpha is supported on row_support(alpha) and whose column beta
is supported on col_support(beta); both enumerators must return finite,
duplicate-free frequency sets.  Optional row/column absolute-sum bounds
(A, B) feed the Schur norm estimate sqrt(A * B).

Finite sections of the matrix are measured by a hand-rolled power
iteration on the normal matrix; numpy only stores the section.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .cyl import (
    EPS_FREQ,
    RATIONAL,
    REAL,
    CylCylDual,
    CylFunction,
    Freq,
    FrequencyKindError,
    _snap_index,
    build,
    dual_fourier,
    freq_eq,
)
from .wigner import wigner

MAX_SUPPORT = 10_000
MAX_SECTION = 20_000


class SymbolContractError(RuntimeError):
    """A support enumerator broke its finiteness/size contract."""


class PowerIterationError(ArithmeticError):
    """Power iteration hit its cap; carries the last singular-value iterate."""

    def __init__(self, message: str, last_value: float):
        super().__init__(message)
        self.last_value = last_value


@dataclass(frozen=True)
class Symbol:
    """Operational symbol: evaluator, support enumerators, optional bounds."""

    name: str
    fourier: Callable[[Freq, Freq], complex]
    row_support: Callable[[Freq], Sequence[Freq]]
    col_support: Callable[[Freq], Sequence[Freq]]
    kind: Optional[str] = None
    schur_row: Optional[float] = None
    schur_col: Optional[float] = None
    eps_freq: float = EPS_FREQ


def _half(f: Freq) -> Freq:
    return f / 2


def matrix_element(sym: Symbol, alpha, beta) -> complex:
    return complex(sym.fourier(alpha - beta, _half(alpha + beta)))


def _check_kind(sym: Symbol, psi: CylFunction) -> None:
    if sym.kind is not None and sym.kind != psi.kind:
        raise FrequencyKindError(
            f"symbol {sym.name!r} works on {sym.kind!r} frequencies, got {psi.kind!r}"
        )


def _finite(sym: Symbol, enum: Callable, f: Freq) -> List[Freq]:
    out = []
    for x in enum(f):
        out.append(x)
        if len(out) > MAX_SUPPORT:
            raise SymbolContractError(
                f"support enumerator of {sym.name!r} exceeded {MAX_SUPPORT} entries at {f}"
            )
    return out


def quantize_apply(sym: Symbol, psi: CylFunction) -> CylFunction:
    """Apply the quantized symbol to a cylindrical function."""
    _check_kind(sym, psi)
    items = []
    for beta, coef in sorted(psi.terms.items()):
        for alpha in sorted(_finite(sym, sym.col_support, beta)):
            m = matrix_element(sym, alpha, beta)
            if m != 0:
                items.append((alpha, m * coef))
    return build(psi.kind, items, psi.eps_freq, psi.eps_coeff)


def form_via_wigner(sym: Symbol, psi1: CylFunction, psi2: CylFunction) -> complex:
    """Sesquilinear form of the operator, computed through the Wigner array.

    Pairing the symbol against the transform of (psi1, psi2) in the
    invariant mean gives sum over entries of sigma_hat(-nu, mu) times the
    entry at (mu, nu); this must agree with <psi1, op psi2>.
    """
    _check_kind(sym, psi1)
    _check_kind(sym, psi2)
    W = wigner(psi1, psi2)
    total = 0j
    for (mu, nu), v in sorted(W.entries.items()):
        s = sym.fourier(-nu, mu)
        if s != 0:
            total += complex(s) * v
    return total


def adjoint(sym: Symbol) -> Symbol:
    """Adjoint symbol: conjugate the evaluator at negated offset, swap supports."""
    base = sym.fourier
    return Symbol(
        name=sym.name + "_adjoint",
        fourier=lambda nu, mu: complex(base(-nu, mu)).conjugate(),
        row_support=sym.col_support,
        col_support=sym.row_support,
        kind=sym.kind,
        schur_row=sym.schur_col,
        schur_col=sym.schur_row,
        eps_freq=sym.eps_freq,
    )


def schur_norm_bound(sym: Symbol) -> float:
    """sqrt(A * B) from the declared row/column absolute-sum bounds."""
    if sym.schur_row is None or sym.schur_col is None:
        raise ValueError(f"symbol {sym.name!r} declares no Schur constants")
    return (sym.schur_row * sym.schur_col) ** 0.5


# ---------------------------------------------------------------------------
# finite sections


class _FreqIndex:
    """Ordered, duplicate-free frequency collection; snaps in the real kind."""

    def __init__(self, kind: str, eps_freq: float):
        self.kind = kind
        self.eps_freq = eps_freq
        self._sorted: List[Freq] = []
        self._set = set()

    def add(self, f: Freq) -> bool:
        if self.kind == RATIONAL:
            if f in self._set:
                return False
            self._set.add(f)
            self._sorted.append(f)
            return True
        x = float(f)
        if _snap_index(self._sorted, x, self.eps_freq) >= 0:
            return False
        from bisect import insort
        insort(self._sorted, x)
        return True

    def frequencies(self) -> List[Freq]:
        return sorted(self._sorted) if self.kind == RATIONAL else list(self._sorted)

    def __len__(self) -> int:
        return len(self._sorted)


def section_frequencies(sym: Symbol, seeds: Iterable[Freq], radius: int) -> List[Freq]:
    """Frequency set grown from seeds by `radius` rounds of support maps."""
    kind = sym.kind if sym.kind is not None else (
        RATIONAL if all(isinstance(s, (int, Fraction)) for s in seeds) else REAL)
    idx = _FreqIndex(kind, sym.eps_freq)
    frontier: List[Freq] = []
    for s in seeds:
        s = Fraction(s) if kind == RATIONAL else float(s)
        if idx.add(s):
            frontier.append(s)
    for _ in range(radius):
        new_frontier: List[Freq] = []
        for f in frontier:
            for g in list(_finite(sym, sym.row_support, f)) + list(_finite(sym, sym.col_support, f)):
                if idx.add(g):
                    new_frontier.append(g)
                if len(idx) > MAX_SECTION:
                    raise SymbolContractError(
                        f"section of {sym.name!r} exceeded {MAX_SECTION} frequencies")
        frontier = new_frontier
    return idx.frequencies()


def section_matrix(sym: Symbol, freqs: Sequence[Freq]) -> np.ndarray:
    n = len(freqs)
    M = np.zeros((n, n), dtype=complex)
    for i, alpha in enumerate(freqs):
        for j, beta in enumerate(freqs):
            M[i, j] = matrix_element(sym, alpha, beta)
    return M


def _power_iteration(M: np.ndarray, tol: float, max_iter: int) -> float:
    n = M.shape[0]
    if n == 0:
        return 0.0
    v = np.array([1.0 + (k + 1.0) / (n + 1.0) for k in range(n)], dtype=complex)
    v /= np.linalg.norm(v)
    sigma_prev = -1.0
    restarts = 0
    for _ in range(max_iter):
        w = M @ v
        sigma = float(np.linalg.norm(w))
        u = M.conj().T @ w
        un = float(np.linalg.norm(u))
        if un == 0.0:
            # start vector landed in the kernel of the normal matrix
            if restarts >= n:
                return 0.0
            v = np.zeros(n, dtype=complex)
            v[restarts] = 1.0
            restarts += 1
            sigma_prev = -1.0
            continue
        v = u / un
        if abs(sigma - sigma_prev) <= tol * max(1.0, sigma):
            return sigma
        sigma_prev = sigma
    raise PowerIterationError(
        f"power iteration did not converge within {max_iter} steps", sigma_prev)


def finite_section_norm(sym: Symbol, seeds: Iterable[Freq], radius: int,
                        tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Largest singular value of the finite section grown from the seeds."""
    freqs = section_frequencies(sym, seeds, radius)
    return _power_iteration(section_matrix(sym, freqs), tol, max_iter)


# ---------------------------------------------------------------------------
# symbol builders


def _infer_kind(mu0) -> str:
    return RATIONAL if isinstance(mu0, (int, Fraction)) else REAL


def symbol_character(mu0, eps_freq: float = EPS_FREQ) -> Symbol:
    """Symbol depending on c only, through the character h_mu0.

    Quantizes to multiplication by h_mu0, a frequency shift.
    """
    kind = _infer_kind(mu0)
    mu0 = Fraction(mu0) if kind == RATIONAL else float(mu0)
    return Symbol(
        name=f"sigma1:{mu0}",
        fourier=lambda nu, mu: 1.0 + 0j if freq_eq(nu, mu0, eps_freq) else 0j,
        row_support=lambda alpha: (alpha - mu0,),
        col_support=lambda beta: (beta + mu0,),
        kind=kind,
        schur_row=1.0,
        schur_col=1.0,
        eps_freq=eps_freq,
    )


def symbol_momentum(eps_freq: float = EPS_FREQ) -> Symbol:
    """Symbol equal to the momentum variable; quantizes to the derivative.

    Unbounded, so no Schur constants are declared.
    """
    return Symbol(
        name="sigma2",
        fourier=lambda nu, mu: complex(float(mu)) if freq_eq(nu, 0, eps_freq) else 0j,
        row_support=lambda alpha: (alpha,),
        col_support=lambda beta: (beta,),
        kind=None,
        eps_freq=eps_freq,
    )


def symbol_symmetric(mu0, eps_freq: float = EPS_FREQ) -> Symbol:
    """Symbol momentum * h_mu0; quantizes to the symmetrized product."""
    kind = _infer_kind(mu0)
    mu0 = Fraction(mu0) if kind == RATIONAL else float(mu0)
    return Symbol(
        name=f"sigma3:{mu0}",
        fourier=lambda nu, mu: complex(float(mu)) if freq_eq(nu, mu0, eps_freq) else 0j,
        row_support=lambda alpha: (alpha - mu0,),
        col_support=lambda beta: (beta + mu0,),
        kind=kind,
        eps_freq=eps_freq,
    )


def finite_symbol(F: CylCylDual, name: str = "finite") -> Symbol:
    """Symbol with finitely many partial-Fourier entries.

    Supports and exact Schur constants are read off the entry list:
    the entry at (nu, mu) couples beta = mu - nu/2 to alpha = mu + nu/2.
    """
    entries: List[Tuple[Freq, Freq, complex]] = []   # (alpha, beta, value)
    for mu in F.support():
        sl = F.slices[mu]
        for nu in sl.support():
            entries.append((mu + _half(nu), mu - _half(nu), sl.terms[nu]))

    class _SideIndex:
        """Groups the partner frequencies and |value| sums per canonical key."""

        def __init__(self):
            self.idx = _FreqIndex(F.kind, F.eps_freq)
            self.partners: dict = {}
            self.abs_sum: dict = {}

        def _canon(self, f: Freq) -> Optional[Freq]:
            if F.kind == RATIONAL:
                return f if f in self.partners else None
            keys = self.idx.frequencies()
            j = _snap_index(keys, float(f), F.eps_freq)
            return keys[j] if j >= 0 else None

        def record(self, key: Freq, partner: Freq, v: complex) -> None:
            self.idx.add(key)
            canon = key if F.kind == RATIONAL else self._canon(key)
            self.partners.setdefault(canon, []).append(partner)
            self.abs_sum[canon] = self.abs_sum.get(canon, 0.0) + abs(v)

        def lookup(self, f: Freq) -> Tuple[Freq, ...]:
            canon = self._canon(f)
            return tuple(sorted(self.partners[canon])) if canon is not None else ()

    rows = _SideIndex()
    cols = _SideIndex()
    for alpha, beta, v in entries:
        rows.record(alpha, beta, v)
        cols.record(beta, alpha, v)

    return Symbol(
        name=name,
        fourier=lambda nu, mu: dual_fourier(F, nu, mu),
        row_support=rows.lookup,
        col_support=cols.lookup,
        kind=F.kind,
        schur_row=max(rows.abs_sum.values(), default=0.0),
        schur_col=max(cols.abs_sum.values(), default=0.0),
        eps_freq=F.eps_freq,
    )
