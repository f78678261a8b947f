"""Phase-space transform: sparse data, marginals, distributional pairing."""

import math
import random
from fractions import Fraction

import pytest
from scipy.integrate import quad

from bohrwigner import cyl
from bohrwigner.duals import GaussianDual, dual_action, embed_cyl, gaussian_wigner_pair_positive
from bohrwigner.wigner import (
    DistributionalWigner,
    hermitian_conjugate,
    momentum_marginal,
    overlap,
    pair,
    position_marginal,
    realization,
    realization_value,
    wigner,
    wigner_dual,
)


def _random_rational(rng, n=3):
    return cyl.build(cyl.RATIONAL, [
        (Fraction(rng.randint(-12, 12), rng.randint(1, 6)),
         complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
        for _ in range(n)
    ])


def _random_gaussian(rng):
    return GaussianDual(
        complex(rng.uniform(0.2, 2.0), rng.uniform(-0.5, 0.5)),
        complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)),
        complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)),
    )


def test_two_characters_give_one_midpoint_entry():
    W = wigner(cyl.character(Fraction(0)), cyl.character(Fraction(1)))
    assert W.entries == {(Fraction(1, 2), Fraction(1)): 1.0}


def test_diagonal_data_of_a_superposition():
    two = cyl.add(cyl.character(Fraction(0)), cyl.character(Fraction(1)))
    W = wigner(two, two)
    assert W.entries == {
        (Fraction(0), Fraction(0)): 1.0,
        (Fraction(1, 2), Fraction(1)): 1.0,
        (Fraction(1, 2), Fraction(-1)): 1.0,
        (Fraction(1), Fraction(0)): 1.0,
    }


def test_single_character_collapses_to_one_real_entry():
    rng = random.Random(5)
    for _ in range(20):
        a = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        mu0 = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        W = wigner(cyl.character(mu0, a), cyl.character(mu0, a))
        assert W.entries == {(mu0, Fraction(0)): complex(a.real * a.real + a.imag * a.imag, 0.0)}


def test_overlap_identity():
    rng = random.Random(7)
    for _ in range(50):
        p1, p2, q1, q2 = (_random_rational(rng) for _ in range(4))
        lhs = overlap(wigner(p1, p2), wigner(q1, q2))
        rhs = cyl.inner_product(p1, q1).conjugate() * cyl.inner_product(p2, q2)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_hermitian_conjugate_swaps_the_arguments():
    rng = random.Random(9)
    p, q = _random_rational(rng), _random_rational(rng)
    assert hermitian_conjugate(wigner(p, q)).entries == wigner(q, p).entries


def test_diagonal_data_is_hermitian_fixed():
    rng = random.Random(10)
    p = _random_rational(rng, 4)
    W = wigner(p, p)
    assert hermitian_conjugate(W).entries == W.entries


def test_momentum_marginal_is_the_exact_power_spectrum():
    rng = random.Random(13)
    p = _random_rational(rng, 5)
    mm = momentum_marginal(wigner(p, p))
    assert mm == {m: v.real * v.real + v.imag * v.imag for m, v in p.terms.items()}


def test_position_marginal_is_the_pointwise_square():
    rng = random.Random(17)
    p = _random_rational(rng, 4)
    W = wigner(p, p)
    for k in range(64):
        x = 2 * math.pi * k / 64
        v = cyl.eval_real(p, x)
        assert abs(position_marginal(W, x) - (v.real ** 2 + v.imag ** 2)) < 1e-10


def test_interference_slice_goes_negative():
    # a two-character state is not a single character, so its transform
    # cannot be pointwise nonnegative; the midpoint slice dips to -0.5
    two = cyl.add(cyl.character(Fraction(0)), cyl.character(Fraction(1)))
    W = wigner(two, two)
    values = [realization_value(W, 2 * math.pi * t / 999, Fraction(1, 2)).real
              for t in range(1000)]
    assert min(values) <= -0.5
    # while the full data still reproduces both nonnegative marginals
    assert all(v >= 0 for v in momentum_marginal(W).values())


def test_pointwise_evaluator_matches_the_pairing():
    rng = random.Random(19)
    for _ in range(10):
        DW = wigner_dual(_random_gaussian(rng), _random_gaussian(rng))
        nu0 = Fraction(rng.randint(-6, 6), 2)
        mu0 = Fraction(rng.randint(-6, 6), 2)
        F = cyl.tensor_delta(cyl.character(-nu0), mu0)
        assert abs(pair(DW, F) - DW.value(nu0, mu0)) < 1e-14


def test_embedded_transform_agrees_with_the_sparse_one():
    rng = random.Random(23)
    p, q = _random_rational(rng), _random_rational(rng)
    W = wigner(p, q)
    DW = wigner_dual(embed_cyl(p), embed_cyl(q))
    for (mu, nu), v in W.entries.items():
        assert abs(DW.value(nu, mu) - v) < 1e-15


def test_reproducing_identity():
    # pairing one transform against the conjugated realization of another
    # factorizes into the two cross actions
    rng = random.Random(29)
    for _ in range(10):
        g1, g2 = _random_gaussian(rng), _random_gaussian(rng)
        p1, p2 = _random_rational(rng), _random_rational(rng)
        F = cyl.conjugate_dual(realization(wigner(p1, p2)))
        lhs = pair(wigner_dual(g1, g2), F)
        rhs = (dual_action(g1, cyl.conjugate(p1)).conjugate()
               * dual_action(g2, cyl.conjugate(p2)))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_gaussian_pairing_frozen_value():
    # standard gaussian against |h_0 + h_1|^2 at label 0: 2 + 2 e^{-1/2}
    xi = cyl.add(cyl.character(Fraction(0)), cyl.character(Fraction(1)))
    val = gaussian_wigner_pair_positive(GaussianDual(1.0, 0.0, 0.0), xi, Fraction(0))
    assert val == pytest.approx(2.0 + 2.0 * math.exp(-0.5), rel=1e-15)
    assert val == pytest.approx(3.2130613194252668, rel=1e-15)


def test_diagonal_gaussian_pairing_is_positive():
    rng = random.Random(31)
    for _ in range(40):
        gamma = _random_gaussian(rng)
        xi = _random_rational(rng)
        mu0 = Fraction(rng.randint(-4, 4))
        val = gaussian_wigner_pair_positive(gamma, xi, mu0)
        assert val > 0.0
        # and the raw pairing carries no imaginary residue
        density = cyl.multiply(cyl.conjugate(xi), xi)
        raw = pair(wigner_dual(gamma, gamma), cyl.tensor_delta(density, mu0))
        assert abs(raw.imag) <= 1e-10 * max(1.0, abs(raw))


def test_real_gaussian_pairing_agrees_with_line_quadrature():
    # For real parameters the diagonal pairing against |xi|^2 x delta_mu0
    # reduces to a weighted line integral:
    #   exp(-2 a mu0^2 + 2 b mu0 + 2 c) *
    #   integral  exp(-x^2 / (2a)) / sqrt(2 pi a) * |xi(x)|^2  dx
    rng = random.Random(37)
    for _ in range(5):
        a = rng.uniform(0.3, 1.5)
        b = rng.uniform(-1.0, 1.0)
        c = rng.uniform(-0.3, 0.3)
        gamma = GaussianDual(complex(a), complex(b), complex(c))
        xi = _random_rational(rng)
        mu0 = Fraction(rng.randint(-3, 3))
        direct = gaussian_wigner_pair_positive(gamma, xi, mu0)

        def integrand(x):
            v = cyl.eval_real(xi, x)
            w = math.exp(-x * x / (2.0 * a)) / math.sqrt(2.0 * math.pi * a)
            return w * (v.real * v.real + v.imag * v.imag)

        m0 = float(mu0)
        front = math.exp(-2.0 * a * m0 * m0 + 2.0 * b * m0 + 2.0 * c)
        integral = quad(integrand, -60.0, 60.0, limit=400)[0]
        assert abs(direct - front * integral) <= 1e-8 * max(1.0, abs(direct))


def test_pairing_rejects_kind_mismatch():
    psi = cyl.character(1.0, kind=cyl.REAL)
    F = cyl.tensor_delta(cyl.character(Fraction(0)), Fraction(0))
    with pytest.raises(ValueError):
        pair(wigner_dual(embed_cyl(psi), embed_cyl(psi)), F)


def test_wigner_requires_matching_kinds():
    with pytest.raises(cyl.FrequencyKindError):
        wigner(cyl.character(Fraction(0)), cyl.character(0.0, kind=cyl.REAL))
