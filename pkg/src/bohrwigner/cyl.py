"""Sparse algebra of almost-periodic cylindrical functions.

A cylindrical function is a finite complex combination of characters
``h_mu(c) = exp(i mu c)`` on the Bohr compactification of the real line.
We store it as a sparse map ``frequency -> complex coefficient``.

Frequencies come in two kinds, fixed per function and never mixed
implicitly:

* ``"rational"``: exact ``fractions.Fraction`` labels.  Equality of
  frequencies is exact, so Kronecker deltas in the calculus are exact.
* ``"real"``: floating-point labels with snapping.  Two frequencies are
  considered the same support point when ``|a - b| <= eps_freq *
  max(1, |a|, |b|)``; inserting a term near an existing support point
  merges the coefficients onto the existing label (first inserted wins).
  After construction, stored support points are pairwise separated by
  more than ``2 * eps_freq * max(1, |mu|)``.

Coefficients with magnitude below ``eps_coeff`` times the largest
coefficient magnitude are dropped at construction, as are exact zeros.

All operations are pure; instances are treated as immutable.
"""

from __future__ import annotations

import json
from bisect import bisect_left, insort
from dataclasses import dataclass, field
from fractions import Fraction
from math import cos, sin
from typing import Callable, Dict, Iterable, List, Mapping, Tuple, Union

Freq = Union[Fraction, float]
Terms = Dict[Freq, complex]

RATIONAL = "rational"
REAL = "real"

EPS_FREQ = 1e-9
EPS_COEFF = 1e-15


class FrequencyKindError(TypeError):
    """Raised when rational and real frequency data are mixed implicitly."""


class SchemaError(ValueError):
    """Raised when serialized data does not match the expected schema."""


def as_rational(mu) -> Fraction:
    """Coerce an exact label (int, Fraction, or 'p/q' string) to Fraction."""
    if isinstance(mu, Fraction):
        return mu
    if isinstance(mu, int):
        return Fraction(mu)
    if isinstance(mu, str):
        return Fraction(mu)
    raise FrequencyKindError(
        f"rational frequencies need int/Fraction labels, got {type(mu).__name__}; "
        "promote the function to real kind instead"
    )


def as_real(mu) -> float:
    if isinstance(mu, bool):
        raise FrequencyKindError("bool is not a frequency")
    if isinstance(mu, (int, float, Fraction)):
        return float(mu)
    raise FrequencyKindError(f"real frequencies need numeric labels, got {type(mu).__name__}")


def freq_eq(a: Freq, b: Freq, eps_freq: float = EPS_FREQ) -> bool:
    """Equality of frequency labels: exact for Fractions, snapped for floats."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    fa, fb = float(a), float(b)
    return abs(fa - fb) <= eps_freq * max(1.0, abs(fa), abs(fb))


def _snap_index(keys: List[float], f: float, eps_freq: float) -> int:
    """Index of the stored key that f snaps onto, or -1.

    keys is sorted.  Stored keys are pairwise separated by more than the
    snap radius, so at most the two bisection neighbours can match; the
    nearer one wins.
    """
    i = bisect_left(keys, f)
    best, best_d = -1, None
    for j in (i - 1, i):
        if 0 <= j < len(keys):
            g = keys[j]
            d = abs(f - g)
            if d <= eps_freq * max(1.0, abs(f), abs(g)) and (best_d is None or d < best_d):
                best, best_d = j, d
    return best


def _snap_accumulate(
    items: Iterable[Tuple[float, complex]], eps_freq: float
) -> Dict[float, complex]:
    """Accumulate (frequency, coefficient) pairs with snapping.

    Insertion order is significant: a term within the eps_freq relation
    of an existing support point merges onto that point.  A final
    coalescing pass restores the separation invariant (> 2 eps_freq
    relative) that single insertions cannot guarantee on their own.
    """
    keys: List[float] = []
    acc: Dict[float, complex] = {}
    order: Dict[float, int] = {}
    n = 0
    for f, a in items:
        j = _snap_index(keys, f, eps_freq)
        if j >= 0:
            acc[keys[j]] += a
        else:
            insort(keys, f)
            acc[f] = a
            order[f] = n
        n += 1
    # coalesce survivors closer than twice the snap radius
    changed = True
    while changed:
        changed = False
        i = 0
        while i + 1 < len(keys):
            a, b = keys[i], keys[i + 1]
            if abs(a - b) <= 2.0 * eps_freq * max(1.0, abs(a), abs(b)):
                keep, drop = (a, b) if order[a] <= order[b] else (b, a)
                acc[keep] += acc.pop(drop)
                keys.pop(i if drop == a else i + 1)
                changed = True
            else:
                i += 1
    return acc


def _drop_small(terms: Terms, eps_coeff: float) -> Terms:
    if not terms:
        return {}
    peak = max(abs(a) for a in terms.values())
    if peak == 0.0:
        return {}
    return {m: a for m, a in terms.items() if a != 0 and abs(a) > eps_coeff * peak}


@dataclass(frozen=True)
class CylFunction:
    """Finite combination of characters, sparse over one frequency kind."""

    kind: str
    terms: Terms
    eps_freq: float = EPS_FREQ
    eps_coeff: float = EPS_COEFF

    def coeff(self, mu) -> complex:
        return fourier_coefficient(self, mu)

    def support(self) -> Tuple[Freq, ...]:
        return tuple(sorted(self.terms))

    def __len__(self) -> int:
        return len(self.terms)


def build(kind: str, items: Iterable[Tuple[Freq, complex]],
          eps_freq: float = EPS_FREQ, eps_coeff: float = EPS_COEFF) -> CylFunction:
    """Canonicalizing constructor: coerces labels, merges, drops small terms."""
    if kind == RATIONAL:
        acc: Terms = {}
        for mu, a in items:
            m = as_rational(mu)
            acc[m] = acc.get(m, 0j) + complex(a)
    elif kind == REAL:
        acc = _snap_accumulate(((as_real(mu), complex(a)) for mu, a in items), eps_freq)
    else:
        raise ValueError(f"unknown frequency kind {kind!r}")
    return CylFunction(kind, _drop_small(acc, eps_coeff), eps_freq, eps_coeff)


def character(mu, amplitude: complex = 1.0, *, kind: str | None = None,
              eps_freq: float = EPS_FREQ, eps_coeff: float = EPS_COEFF) -> CylFunction:
    """The character h_mu scaled by amplitude.

    The kind is inferred from the label type (Fraction/int exact, float
    real) unless given explicitly.
    """
    if kind is None:
        kind = RATIONAL if isinstance(mu, (Fraction, int)) else REAL
    return build(kind, [(mu, amplitude)], eps_freq, eps_coeff)


def zero(kind: str = RATIONAL, eps_freq: float = EPS_FREQ,
         eps_coeff: float = EPS_COEFF) -> CylFunction:
    return CylFunction(kind, {}, eps_freq, eps_coeff)


def _require_same_kind(psi: CylFunction, phi: CylFunction) -> None:
    if psi.kind != phi.kind:
        raise FrequencyKindError(
            f"cannot mix kinds {psi.kind!r} and {phi.kind!r}; promote explicitly"
        )


def _sorted_items(psi: CylFunction) -> List[Tuple[Freq, complex]]:
    return sorted(psi.terms.items())


def add(psi: CylFunction, phi: CylFunction) -> CylFunction:
    _require_same_kind(psi, phi)
    return build(psi.kind, _sorted_items(psi) + _sorted_items(phi),
                 psi.eps_freq, psi.eps_coeff)


def scale(psi: CylFunction, a: complex) -> CylFunction:
    return build(psi.kind, ((m, complex(a) * v) for m, v in _sorted_items(psi)),
                 psi.eps_freq, psi.eps_coeff)


def multiply(psi: CylFunction, phi: CylFunction) -> CylFunction:
    """Pointwise product; on Fourier data this is support convolution."""
    _require_same_kind(psi, phi)
    items = []
    for m, a in _sorted_items(psi):
        for n_, b in _sorted_items(phi):
            items.append((m + n_, a * b))
    return build(psi.kind, items, psi.eps_freq, psi.eps_coeff)


def conjugate(psi: CylFunction) -> CylFunction:
    """Pointwise complex conjugate: coefficient at mu becomes conj of -mu."""
    return build(psi.kind, ((-m, v.conjugate()) for m, v in _sorted_items(psi)),
                 psi.eps_freq, psi.eps_coeff)


def fourier_coefficient(psi: CylFunction, mu) -> complex:
    """Coefficient at frequency mu (0 off support); snapped lookup for real kind.

    Rational-kind lookups demand exact labels: probing with a float would
    silently miss nearby exact frequencies, so it raises instead.
    """
    if psi.kind == RATIONAL:
        return psi.terms.get(as_rational(mu), 0j)
    f = as_real(mu)
    keys = sorted(psi.terms)
    j = _snap_index(keys, f, psi.eps_freq)
    return psi.terms[keys[j]] if j >= 0 else 0j


def inner_product(psi: CylFunction, phi: CylFunction) -> complex:
    """Hilbert inner product, conjugate-linear in the first argument.

    Characters are orthonormal: <h_mu, h_nu> = delta_{mu,nu}.
    """
    _require_same_kind(psi, phi)
    total = 0j
    for m, a in _sorted_items(psi):
        b = fourier_coefficient(phi, m)
        if b != 0:
            total += a.conjugate() * b
    return total


def norm(psi: CylFunction) -> float:
    return sum(a.real * a.real + a.imag * a.imag for a in psi.terms.values()) ** 0.5


def eval_real(psi: CylFunction, x: float) -> complex:
    """Value of the restriction to the classical line at the point x."""
    total = 0j
    for m, a in _sorted_items(psi):
        t = float(m) * x
        total += a * complex(cos(t), sin(t))
    return total


def shift(psi: CylFunction, mu0) -> CylFunction:
    """Multiplication by the character h_mu0: shifts every frequency by mu0."""
    if psi.kind == RATIONAL:
        m0 = as_rational(mu0)
    else:
        m0 = as_real(mu0)
    return build(psi.kind, ((m + m0, v) for m, v in _sorted_items(psi)),
                 psi.eps_freq, psi.eps_coeff)


def momentum(psi: CylFunction) -> CylFunction:
    """Derivative operator: multiplies each coefficient by its frequency.

    The frequency-zero term is annihilated exactly, before any floating
    multiplication, so the kernel is exact in both kinds.
    """
    items = [(m, v * float(m)) for m, v in _sorted_items(psi) if m != 0]
    return build(psi.kind, items, psi.eps_freq, psi.eps_coeff)


def parity(psi: CylFunction) -> CylFunction:
    """Reflection c -> -c: negates every frequency."""
    return build(psi.kind, ((-m, v) for m, v in _sorted_items(psi)),
                 psi.eps_freq, psi.eps_coeff)


def promote_to_real(psi: CylFunction) -> CylFunction:
    """Explicit promotion of an exact-kind function to the real kind."""
    if psi.kind == REAL:
        return psi
    return build(REAL, ((float(m), v) for m, v in _sorted_items(psi)),
                 psi.eps_freq, psi.eps_coeff)


# ---------------------------------------------------------------------------
# serialization


def _freq_to_json(kind: str, mu: Freq):
    return str(mu) if kind == RATIONAL else float(mu)


def _freq_from_json(kind: str, raw) -> Freq:
    if kind == RATIONAL:
        if not isinstance(raw, str):
            raise SchemaError(f"rational freq must be a string 'p/q', got {raw!r}")
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational frequency {raw!r}: {exc}") from exc
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise SchemaError(f"real freq must be a number, got {raw!r}")
    return float(raw)


def to_json_dict(psi: CylFunction) -> dict:
    return {
        "kind": psi.kind,
        "terms": [
            {"freq": _freq_to_json(psi.kind, m), "re": v.real, "im": v.imag}
            for m, v in _sorted_items(psi)
        ],
    }


def from_json_dict(data: dict, eps_freq: float = EPS_FREQ,
                   eps_coeff: float = EPS_COEFF) -> CylFunction:
    if not isinstance(data, dict):
        raise SchemaError("expected a JSON object with 'kind' and 'terms'")
    kind = data.get("kind")
    if kind not in (RATIONAL, REAL):
        raise SchemaError(f"kind must be 'rational' or 'real', got {kind!r}")
    raw_terms = data.get("terms")
    if not isinstance(raw_terms, list):
        raise SchemaError("'terms' must be a list")
    items = []
    for i, t in enumerate(raw_terms):
        if not isinstance(t, dict) or not {"freq", "re", "im"} <= set(t):
            raise SchemaError(f"terms[{i}] must be an object with freq/re/im")
        try:
            re_, im_ = float(t["re"]), float(t["im"])
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"terms[{i}] has non-numeric coefficient") from exc
        items.append((_freq_from_json(kind, t["freq"]), complex(re_, im_)))
    return build(kind, items, eps_freq, eps_coeff)


def to_json(psi: CylFunction) -> str:
    return json.dumps(to_json_dict(psi), indent=2, sort_keys=True)


def from_json(text: str, eps_freq: float = EPS_FREQ,
              eps_coeff: float = EPS_COEFF) -> CylFunction:
    return from_json_dict(json.loads(text), eps_freq, eps_coeff)


# ---------------------------------------------------------------------------
# functions of (c, mu): one cylindrical slice per discrete dual label mu


@dataclass(frozen=True)
class CylCylDual:
    """Finite sum of tensors phi(c) x delta_mu, stored as slices by mu."""

    kind: str
    slices: Dict[Freq, CylFunction]
    eps_freq: float = EPS_FREQ

    def support(self) -> Tuple[Freq, ...]:
        return tuple(sorted(self.slices))


def build_dual(kind: str, slices: Mapping[Freq, CylFunction],
               eps_freq: float = EPS_FREQ) -> CylCylDual:
    clean: Dict[Freq, CylFunction] = {}
    for mu in sorted(slices):
        sl = slices[mu]
        if sl.kind != kind:
            raise FrequencyKindError("slice kind does not match container kind")
        if sl.terms:
            key = as_rational(mu) if kind == RATIONAL else as_real(mu)
            if key in clean:
                clean[key] = add(clean[key], sl)
            else:
                clean[key] = sl
    return CylCylDual(kind, clean, eps_freq)


def tensor_delta(phi: CylFunction, mu0) -> CylCylDual:
    """The elementary tensor phi(c) x delta_{mu0}."""
    return build_dual(phi.kind, {mu0: phi}, phi.eps_freq)


def dual_slice(F: CylCylDual, mu) -> CylFunction:
    """Slice at dual label mu, with snapped lookup for the real kind."""
    if F.kind == RATIONAL:
        return F.slices.get(as_rational(mu),
                            zero(RATIONAL))
    f = as_real(mu)
    keys = sorted(F.slices)
    j = _snap_index([float(k) for k in keys], f, F.eps_freq)
    return F.slices[keys[j]] if j >= 0 else zero(REAL, F.eps_freq)


def dual_fourier(F: CylCylDual, nu, mu) -> complex:
    """Partial Fourier transform: coefficient of h_nu in the slice at mu."""
    return fourier_coefficient(dual_slice(F, mu), nu)


def conjugate_dual(F: CylCylDual) -> CylCylDual:
    """Pointwise complex conjugate in c, slice by slice."""
    return build_dual(F.kind, {mu: conjugate(sl) for mu, sl in F.slices.items()},
                      F.eps_freq)
