"""Wigner transform on the Bohr compactification, in Fourier coordinates.

For a pair of cylindrical functions the transform is a finite array over
midpoint/offset frequency pairs:

    W(psi1, psi2) has entry  conj(psi1_hat(mu - nu/2)) * psi2_hat(mu + nu/2)
    at (mu, nu), so a support pair (a, b) of the inputs contributes the
    single entry mu = (a + b)/2, nu = b - a.

The same formula read as a function of two dual elements (maps from
frequencies to coefficients, not necessarily square-summable) defines the
distributional transform; it never materializes an array and is evaluated
either pointwise or paired against a finite test function of (c, mu).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, sin
from typing import Dict, Tuple

from .cyl import (
    REAL,
    CylCylDual,
    CylFunction,
    Freq,
    _drop_small,
    _require_same_kind,
    _snap_index,
    build,
    build_dual,
    dual_slice,
    eval_real,
    fourier_coefficient,
)

Entry = Tuple[Freq, Freq]


@dataclass(frozen=True)
class WignerData:
    """Finite Wigner array: (mu, nu) -> complex, mu midpoint, nu offset."""

    kind: str
    entries: Dict[Entry, complex]
    eps_freq: float
    eps_coeff: float

    def support(self) -> Tuple[Entry, ...]:
        return tuple(sorted(self.entries))


def _half(f: Freq) -> Freq:
    return f / 2


def wigner(psi1: CylFunction, psi2: CylFunction) -> WignerData:
    """Wigner transform of a pair of cylindrical functions.

    The support-pair map (a, b) -> ((a+b)/2, b-a) is a bijection, so no
    two input pairs collide on one entry.
    """
    _require_same_kind(psi1, psi2)
    entries: Dict[Entry, complex] = {}
    for a, ca in sorted(psi1.terms.items()):
        for b, cb in sorted(psi2.terms.items()):
            entries[(_half(a + b), b - a)] = ca.conjugate() * cb
    return WignerData(psi1.kind, _drop_small(entries, psi1.eps_coeff),
                      psi1.eps_freq, psi1.eps_coeff)


def hermitian_conjugate(W: WignerData) -> WignerData:
    """Entry map (mu, nu) -> conj of entry at (mu, -nu)."""
    flipped = {(mu, -nu): v.conjugate() for (mu, nu), v in W.entries.items()}
    return WignerData(W.kind, flipped, W.eps_freq, W.eps_coeff)


def overlap(W1: WignerData, W2: WignerData) -> complex:
    """Sum of conj(W1) * W2 over matching entries.

    For diagonal data this is the transition probability between the two
    underlying pairs.
    """
    if W1.kind != W2.kind:
        raise ValueError("cannot overlap Wigner data of different kinds")
    total = 0j
    if W1.kind != REAL:
        for key, v1 in sorted(W1.entries.items()):
            v2 = W2.entries.get(key)
            if v2 is not None:
                total += v1.conjugate() * v2
        return total
    # real kind: snapped matching, first on mu then on nu within the slice
    by_mu: Dict[float, Dict[float, complex]] = {}
    for (mu, nu), v in W2.entries.items():
        by_mu.setdefault(float(mu), {})[float(nu)] = v
    mus = sorted(by_mu)
    for (mu, nu), v1 in sorted(W1.entries.items()):
        i = _snap_index(mus, float(mu), W1.eps_freq)
        if i < 0:
            continue
        nus = sorted(by_mu[mus[i]])
        j = _snap_index(nus, float(nu), W1.eps_freq)
        if j >= 0:
            total += v1.conjugate() * by_mu[mus[i]][nus[j]]
    return total


def momentum_marginal(W: WignerData) -> Dict[Freq, float]:
    """The nu = 0 diagonal; for W(psi, psi) this is mu -> |psi_hat(mu)|^2."""
    return {mu: v.real for (mu, nu), v in sorted(W.entries.items()) if nu == 0}


def position_marginal(W: WignerData, x: float) -> complex:
    """Sum of all entries weighted by exp(i nu x).

    For W(psi, psi) this equals |psi restricted to the line|^2 at x, so
    the imaginary part vanishes up to rounding.
    """
    total = 0j
    for (mu, nu), v in sorted(W.entries.items()):
        t = float(nu) * x
        total += v * complex(cos(t), sin(t))
    return total


def realization(W: WignerData) -> CylCylDual:
    """The function of (c, mu): slice at mu is sum_nu entry(mu, nu) h_nu."""
    slices: Dict[Freq, list] = {}
    for (mu, nu), v in sorted(W.entries.items()):
        slices.setdefault(mu, []).append((nu, v))
    built = {
        mu: build(W.kind, items, W.eps_freq, W.eps_coeff)
        for mu, items in slices.items()
    }
    return build_dual(W.kind, built, W.eps_freq)


def realization_value(W: WignerData, x: float, mu) -> complex:
    """Value of the realization at line point x and dual label mu."""
    return eval_real(dual_slice(realization(W), mu), x)


# ---------------------------------------------------------------------------
# distributional transform


@dataclass(frozen=True)
class DistributionalWigner:
    """Wigner transform of two dual elements, kept as its evaluators.

    gamma1 and gamma2 expose coeff(mu); nothing is materialized.
    """

    gamma1: object
    gamma2: object

    def value(self, nu, mu) -> complex:
        """Pointwise Fourier value at offset nu, midpoint mu."""
        g1 = self.gamma1.coeff(mu - _half(nu))
        g2 = self.gamma2.coeff(mu + _half(nu))
        return g1.conjugate() * g2


def wigner_dual(gamma1, gamma2) -> DistributionalWigner:
    return DistributionalWigner(gamma1, gamma2)


def pair(W: DistributionalWigner, F: CylCylDual) -> complex:
    """Action of the distributional transform on a finite test function.

    This double sum over the support of F is the defining formula; every
    other identity in the package is checked against it:

        sum_{mu, nu}  conj(g1(mu + nu/2)) g2(mu - nu/2) F_hat(nu, mu)
    """
    for g in (W.gamma1, W.gamma2):
        gk = getattr(g, "kind", None)
        if gk is not None and gk != F.kind:
            raise ValueError(
                f"dual element of kind {gk!r} paired with test function of kind {F.kind!r}"
            )
    total = 0j
    for mu in F.support():
        sl = F.slices[mu]
        for nu in sl.support():
            fh = sl.terms[nu]
            g1 = W.gamma1.coeff(mu + _half(nu))
            g2 = W.gamma2.coeff(mu - _half(nu))
            total += g1.conjugate() * g2 * fh
    return total
