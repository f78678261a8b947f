"""Symbol quantization: matrix elements, adjoints, norms, finite sections."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from bohrwigner import cyl
from bohrwigner.weyl import (
    PowerIterationError,
    Symbol,
    SymbolContractError,
    adjoint,
    finite_section_norm,
    finite_symbol,
    form_via_wigner,
    matrix_element,
    quantize_apply,
    schur_norm_bound,
    section_frequencies,
    section_matrix,
    symbol_character,
    symbol_momentum,
    symbol_symmetric,
)


def _random_rational(rng, n=3):
    return cyl.build(cyl.RATIONAL, [
        (Fraction(rng.randint(-12, 12), rng.randint(1, 6)),
         complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
        for _ in range(n)
    ])


def _random_finite_symbol(rng, n=3):
    slices = {}
    for _ in range(n):
        mu = Fraction(rng.randint(-6, 6), 2)
        slices[mu] = cyl.add(slices.get(mu, cyl.zero()), _random_rational(rng, 2))
    return finite_symbol(cyl.build_dual(cyl.RATIONAL, slices))


def test_character_symbol_is_the_frequency_shift():
    rng = random.Random(3)
    for _ in range(50):
        mu0 = Fraction(rng.randint(-16, 16), rng.randint(1, 8))
        beta = Fraction(rng.randint(-16, 16), rng.randint(1, 8))
        hb = cyl.character(beta, complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))
        assert quantize_apply(symbol_character(mu0), hb) == cyl.shift(hb, mu0)


def test_momentum_symbol_is_the_derivative():
    rng = random.Random(4)
    for _ in range(50):
        beta = Fraction(rng.randint(-16, 16), rng.randint(1, 8))
        hb = cyl.character(beta)
        assert quantize_apply(symbol_momentum(), hb) == cyl.momentum(hb)
    assert quantize_apply(symbol_momentum(), cyl.character(Fraction(3, 2))).terms \
        == {Fraction(3, 2): 1.5}


def test_symmetric_symbol_is_the_ordered_average_bitwise_on_dyadics():
    # with dyadic frequencies every float step below is exact, so the two
    # routes must agree to the last bit
    rng = random.Random(5)
    for _ in range(50):
        mu0 = Fraction(rng.randint(-40, 40), 2 ** rng.randint(0, 4))
        beta = Fraction(rng.randint(-40, 40), 2 ** rng.randint(0, 4))
        hb = cyl.character(beta)
        via_symbol = quantize_apply(symbol_symmetric(mu0), hb)
        shifted = cyl.shift(cyl.momentum(hb), mu0)
        deriv = cyl.momentum(cyl.shift(hb, mu0))
        averaged = cyl.scale(cyl.add(shifted, deriv), 0.5)
        assert via_symbol == averaged


def test_symmetric_symbol_on_general_rationals():
    rng = random.Random(6)
    for _ in range(50):
        mu0 = Fraction(rng.randint(-16, 16), rng.randint(1, 9))
        beta = Fraction(rng.randint(-16, 16), rng.randint(1, 9))
        hb = cyl.character(beta)
        got = quantize_apply(symbol_symmetric(mu0), hb).terms.get(beta + mu0, 0j)
        want = float(beta) + float(mu0) / 2.0
        assert abs(got - want) <= 1e-15 * max(1.0, abs(want))


def test_quadratic_form_route_matches_operator_route():
    rng = random.Random(7)
    for _ in range(20):
        p1, p2 = _random_rational(rng), _random_rational(rng)
        for sym in (symbol_character(Fraction(1, 2)), symbol_momentum(),
                    symbol_symmetric(Fraction(1, 2)), _random_finite_symbol(rng)):
            lhs = cyl.inner_product(p1, quantize_apply(sym, p2))
            rhs = form_via_wigner(sym, p1, p2)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_adjoint_transposes_and_conjugates():
    rng = random.Random(9)
    sym = _random_finite_symbol(rng)
    adj = adjoint(sym)
    for _ in range(30):
        a = Fraction(rng.randint(-8, 8), 2)
        b = Fraction(rng.randint(-8, 8), 2)
        assert matrix_element(adj, a, b) == matrix_element(sym, b, a).conjugate()


def test_adjoint_form_identity():
    rng = random.Random(11)
    builtins = [symbol_character(Fraction(2, 3)), symbol_momentum(),
                symbol_symmetric(Fraction(-1, 4))]
    for _ in range(10):
        p1, p2 = _random_rational(rng), _random_rational(rng)
        for sym in builtins + [_random_finite_symbol(rng)]:
            lhs = cyl.inner_product(p1, quantize_apply(sym, p2))
            rhs = cyl.inner_product(quantize_apply(adjoint(sym), p1), p2)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_double_adjoint_round_trips_matrix_elements():
    rng = random.Random(13)
    sym = _random_finite_symbol(rng)
    back = adjoint(adjoint(sym))
    for _ in range(20):
        a = Fraction(rng.randint(-8, 8), 2)
        b = Fraction(rng.randint(-8, 8), 2)
        assert matrix_element(back, a, b) == matrix_element(sym, a, b)


def test_finite_symbol_declares_exact_row_column_sums():
    F = cyl.build_dual(cyl.RATIONAL, {
        Fraction(0): cyl.character(Fraction(1), 2.0),
        Fraction(1): cyl.character(Fraction(-1), -3.0),
    })
    sym = finite_symbol(F)
    # entries: (alpha, beta) = (1/2, -1/2) value 2 and (1/2, 3/2) value -3
    assert matrix_element(sym, Fraction(1, 2), Fraction(-1, 2)) == 2.0
    assert matrix_element(sym, Fraction(1, 2), Fraction(3, 2)) == -3.0
    assert schur_norm_bound(sym) == pytest.approx(math.sqrt(5.0 * 3.0))
    assert set(sym.col_support(Fraction(-1, 2))) == {Fraction(1, 2)}
    assert set(adjoint(sym).col_support(Fraction(1, 2))) == {Fraction(-1, 2), Fraction(3, 2)}


def test_schur_bound_needs_declared_constants():
    with pytest.raises(ValueError):
        schur_norm_bound(symbol_momentum())


def test_schur_bound_dominates_every_finite_section():
    rng = random.Random(17)
    for _ in range(10):
        sym = _random_finite_symbol(rng)
        bound = schur_norm_bound(sym)
        val = finite_section_norm(sym, [Fraction(0), Fraction(1, 2)], 2)
        assert val <= bound + 1e-8


def test_power_iteration_matches_dense_svd():
    rng = random.Random(19)
    for _ in range(8):
        sym = _random_finite_symbol(rng)
        seeds = [Fraction(0), Fraction(1, 2), Fraction(-1)]
        freqs = section_frequencies(sym, seeds, 2)
        M = section_matrix(sym, freqs)
        want = np.linalg.norm(M, 2)
        got = finite_section_norm(sym, seeds, 2)
        assert abs(got - want) <= 1e-8 * max(1.0, want)


def test_sections_grow_monotonically_with_radius():
    rng = random.Random(23)
    sym = _random_finite_symbol(rng, 4)
    seeds = [Fraction(0)]
    values = [finite_section_norm(sym, seeds, r) for r in range(1, 5)]
    for lo, hi in zip(values, values[1:]):
        assert hi >= lo - 1e-9


def test_oversized_support_enumeration_is_refused():
    wide = Symbol(
        name="wide",
        fourier=lambda nu, mu: 0j,
        row_support=lambda a: tuple(range(20001)),
        col_support=lambda b: tuple(range(20001)),
        kind=cyl.RATIONAL,
    )
    with pytest.raises(SymbolContractError):
        quantize_apply(wide, cyl.character(Fraction(0)))


def test_power_iteration_reports_nonconvergence():
    sym = finite_symbol(cyl.build_dual(cyl.RATIONAL, {
        Fraction(1, 2): cyl.character(Fraction(1)),
        Fraction(0): cyl.character(Fraction(0)),
    }))
    with pytest.raises(PowerIterationError) as exc:
        finite_section_norm(sym, [Fraction(0)], 3, tol=0.0, max_iter=2)
    assert exc.value.last_value > 0.0


def test_kind_checks_on_application():
    sym = symbol_character(Fraction(1))
    with pytest.raises(cyl.FrequencyKindError):
        quantize_apply(sym, cyl.character(1.0, kind=cyl.REAL))
