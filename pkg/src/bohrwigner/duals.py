"""Dual elements: linear functionals on the cylindrical functions.

A dual element is represented by its coefficient map mu -> Gamma_hat(mu),
the value of the functional on the character h_{-mu}.  The action on a
finite combination Phi is then

    Gamma(Phi) = sum_mu Gamma_hat(mu) Phi_hat(-mu),

a finite sum over the support of Phi.  Two families are provided: the
embedding of a cylindrical function itself, and the Gaussian family

    Gamma_hat(mu) = exp(-a mu^2 + b mu + c),    Re(a) > 0,

whose action can also be computed a second, independent way: as an
integral of Phi restricted to the classical line against a complex
Gaussian density.  That quadrature route is the module's oracle; it never
shares code with the coefficient route.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from scipy.integrate import quad

from .cyl import (
    CylFunction,
    SchemaError,
    conjugate,
    eval_real,
    fourier_coefficient,
    multiply,
    tensor_delta,
)
from .wigner import pair, wigner_dual


class QuadratureError(ArithmeticError):
    """Truncated quadrature failed to stabilize; carries the last estimate."""

    def __init__(self, message: str, last_value: complex, error_estimate: float):
        super().__init__(message)
        self.last_value = last_value
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class GaussianDual:
    """Gaussian coefficient family exp(-a mu^2 + b mu + c) with Re(a) > 0."""

    a: complex
    b: complex
    c: complex

    # Gaussians evaluate at any real frequency, so they pair with either kind.
    kind = None

    def __post_init__(self):
        if not (self.a.real > 0):
            raise ValueError(f"need Re(a) > 0, got a = {self.a}")

    def coeff(self, mu) -> complex:
        m = float(mu)
        return cmath.exp(-self.a * m * m + self.b * m + self.c)

    def density(self, x: float) -> complex:
        """Density of the induced measure on the classical line.

        Normalized so that integrating density(x) * exp(-i mu x) over the
        line returns coeff(mu).
        """
        z = x - 1j * self.b
        return cmath.exp(-z * z / (4 * self.a) + self.c) / cmath.sqrt(4 * cmath.pi * self.a)


@dataclass(frozen=True)
class CylDual:
    """A cylindrical function viewed as a functional via the Haar pairing.

    The coefficient map is the function's own Fourier data: pairing
    h_mu against h_{-nu} under the normalized invariant mean gives
    delta_{mu,nu}.
    """

    psi: CylFunction

    @property
    def kind(self) -> str:
        return self.psi.kind

    def coeff(self, mu) -> complex:
        return fourier_coefficient(self.psi, mu)


def embed_cyl(psi: CylFunction) -> CylDual:
    return CylDual(psi)


def dual_action(gamma, phi: CylFunction) -> complex:
    """Gamma(Phi) as the finite coefficient sum over the support of Phi."""
    gk = getattr(gamma, "kind", None)
    if gk is not None and gk != phi.kind:
        raise ValueError(f"dual element of kind {gk!r} applied to {phi.kind!r} function")
    total = 0j
    for nu, coef in sorted(phi.terms.items()):
        total += gamma.coeff(-nu) * coef
    return total


def _quad_complex(f, lo: float, hi: float) -> tuple[complex, float]:
    re, re_err = quad(lambda x: f(x).real, lo, hi, limit=400, epsabs=1e-13, epsrel=1e-13)
    im, im_err = quad(lambda x: f(x).imag, lo, hi, limit=400, epsabs=1e-13, epsrel=1e-13)
    return complex(re, im), math.hypot(re_err, im_err)


def reduction_action(gamma: GaussianDual, phi: CylFunction,
                     rel_tol: float = 1e-10, max_doublings: int = 8) -> complex:
    """Gamma(Phi) by quadrature against the induced line density.

    The integrand decays like a Gaussian around the center Re(i b); we
    truncate to a window wide enough for the tail to sit below 1e-16,
    then keep doubling the half-width until two successive results agree
    to rel_tol.  Independent of dual_action by construction.
    """
    a, b = gamma.a, gamma.b
    ar = a.real
    center = -b.imag
    # decay exponent of |density| is [ar t^2 - 2 t b.real a.imag - ...] / (4|a|^2)
    mod2 = a.real * a.real + a.imag * a.imag
    half_width = abs(b.real * a.imag) / ar + math.sqrt(160.0 * mod2 / ar) + 1.0

    def integrand(x: float) -> complex:
        return gamma.density(x) * eval_real(phi, x)

    prev: Optional[complex] = None
    value = 0j
    err = math.inf
    for _ in range(max_doublings):
        value, err = _quad_complex(integrand, center - half_width, center + half_width)
        if prev is not None and abs(value - prev) <= rel_tol * max(1.0, abs(value)):
            return value
        prev = value
        half_width *= 2.0
    raise QuadratureError(
        f"quadrature did not stabilize to {rel_tol:g} after {max_doublings} doublings",
        value, max(err, abs(value - prev) if prev is not None else err),
    )


def gaussian_wigner_pair_positive(gamma: GaussianDual, xi: CylFunction, mu0) -> float:
    """Diagonal Wigner pairing against |xi|^2 x delta_{mu0}.

    The test function is nonnegative in its first slot by construction,
    so the pairing must come out real and nonnegative; a residual
    imaginary part above 1e-10 is an error, not noise to discard.
    """
    density = multiply(conjugate(xi), xi)
    value = pair(wigner_dual(gamma, gamma), tensor_delta(density, mu0))
    if abs(value.imag) > 1e-10 * max(1.0, abs(value)):
        raise ValueError(f"pairing of a diagonal transform came out non-real: {value}")
    return value.real


# ---------------------------------------------------------------------------
# serialization


def gaussian_to_json_dict(gamma: GaussianDual) -> dict:
    return {
        "a": [gamma.a.real, gamma.a.imag],
        "b": [gamma.b.real, gamma.b.imag],
        "c": [gamma.c.real, gamma.c.imag],
    }


def gaussian_from_json_dict(data: dict) -> GaussianDual:
    if not isinstance(data, dict) or not {"a", "b", "c"} <= set(data):
        raise SchemaError("expected an object with complex pairs a, b, c")
    vals = {}
    for key in ("a", "b", "c"):
        raw = data[key]
        if (not isinstance(raw, list) or len(raw) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in raw)):
            raise SchemaError(f"field {key!r} must be a [re, im] number pair")
        vals[key] = complex(raw[0], raw[1])
    return GaussianDual(vals["a"], vals["b"], vals["c"])
