"""Seeded self-check suites behind the `verify` command.

Each suite replays a compressed version of the package's defining
identities with randomized inputs drawn from the configured seed, and
returns machine-readable results.  A corrupted tolerance configuration
(say a snap radius of 1) makes the frequency bookkeeping collapse and is
reported as ordinary failures, which is the point: the suites check the
shipped binary against its own contracts, they do not assume them.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple
from zlib import crc32

from . import cyl, duals, holonomy, weyl
from .config import RunConfig
from .wigner import (
    hermitian_conjugate,
    momentum_marginal,
    overlap,
    pair as wigner_pair,
    position_marginal,
    realization,
    wigner,
    wigner_dual,
)


class _Suite:
    def __init__(self, cfg: RunConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.cases = 0
        self.failures: List[str] = []

    def check(self, ok: bool, label: str) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(label)

    def close(self, tag: str, err: Exception) -> None:
        self.cases += 1
        self.failures.append(f"{tag}: unexpected {type(err).__name__}: {err}")

    # input generators ----------------------------------------------------

    def rational_fn(self, n: int = 3) -> cyl.CylFunction:
        items = [(Fraction(self.rng.randint(-16, 16), self.rng.randint(1, 8)),
                  complex(self.rng.uniform(-1, 1), self.rng.uniform(-1, 1)))
                 for _ in range(n)]
        return cyl.build(cyl.RATIONAL, items, self.cfg.eps_freq, self.cfg.eps_coeff)

    def real_fn(self, n: int = 3) -> cyl.CylFunction:
        items = [(self.rng.uniform(-8, 8),
                  complex(self.rng.uniform(-1, 1), self.rng.uniform(-1, 1)))
                 for _ in range(n)]
        return cyl.build(cyl.REAL, items, self.cfg.eps_freq, self.cfg.eps_coeff)

    def gaussian(self) -> duals.GaussianDual:
        return duals.GaussianDual(
            complex(self.rng.uniform(0.2, 2.0), self.rng.uniform(-0.5, 0.5)),
            complex(self.rng.uniform(-1.5, 1.5), self.rng.uniform(-1.5, 1.5)),
            complex(self.rng.uniform(-0.3, 0.3), self.rng.uniform(-0.3, 0.3)),
        )


def _suite_character_algebra(s: _Suite) -> None:
    for k in range(12):
        mu = Fraction(s.rng.randint(-12, 12), s.rng.randint(1, 6))
        nu = Fraction(s.rng.randint(-12, 12), s.rng.randint(1, 6))
        ip = cyl.inner_product(cyl.character(mu), cyl.character(nu))
        s.check(ip == (1 if mu == nu else 0), f"orthonormality[{k}] mu={mu} nu={nu}")
        shifted = cyl.shift(cyl.momentum(cyl.character(nu)), mu)
        other = cyl.momentum(cyl.shift(cyl.character(nu), mu))
        comm = cyl.add(shifted, cyl.scale(other, -1))
        got = comm.terms.get(mu + nu, 0j)
        s.check(abs(got - (-float(mu))) < 1e-12 or (mu == 0 and not comm.terms),
                f"shift-derivative commutator[{k}]")
    for k in range(8):
        p, q = s.rational_fn(), s.rational_fn()
        x = s.rng.uniform(-3, 3)
        lhs = cyl.eval_real(cyl.multiply(p, q), x)
        rhs = cyl.eval_real(p, x) * cyl.eval_real(q, x)
        s.check(abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs)), f"eval product rule[{k}]")
        back = cyl.from_json(cyl.to_json(p), s.cfg.eps_freq, s.cfg.eps_coeff)
        s.check(back == p, f"rational json round-trip[{k}]")
        s.check(cyl.parity(cyl.parity(p)) == p, f"parity involution[{k}]")
        pi_p = cyl.parity(cyl.momentum(p))
        p_pi = cyl.momentum(cyl.parity(p))
        diff = cyl.add(pi_p, p_pi)
        s.check(max((abs(v) for v in diff.terms.values()), default=0.0) < 1e-12,
                f"derivative anticommutes with parity[{k}]")


def _suite_snapping(s: _Suite) -> None:
    eps = s.cfg.eps_freq
    merged = cyl.build(cyl.REAL, [(1.0, 2.0), (1.0 + eps / 4, 3.0)], eps)
    s.check(len(merged) == 1 and abs(merged.terms.get(1.0, 0) - 5.0) < 1e-12,
            "near-duplicate insertion merges onto first label")
    for k in range(10):
        psi = s.real_fn(6)
        sup = psi.support()
        ok = all(
            abs(float(a) - float(b)) > 2.0 * psi.eps_freq * max(1.0, abs(float(a)), abs(float(b)))
            for a, b in zip(sup, sup[1:]))
        s.check(ok, f"support separation invariant[{k}]")
    scheme = holonomy.MubarScheme(s.cfg.area_constant)
    spread = holonomy.e_apply(scheme, cyl.character(-10.0, kind=cyl.REAL,
                                                    eps_freq=s.cfg.eps_freq,
                                                    eps_coeff=s.cfg.eps_coeff))
    s.check(len(spread) == 3,
            f"three distinct spread frequencies at beta=-10, got {len(spread)}")


def _suite_wigner_identities(s: _Suite) -> None:
    for k in range(10):
        p1, p2, q1, q2 = (s.rational_fn() for _ in range(4))
        lhs = overlap(wigner(p1, p2), wigner(q1, q2))
        rhs = cyl.inner_product(p1, q1).conjugate() * cyl.inner_product(p2, q2)
        s.check(abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs)), f"overlap identity[{k}]")
    for k in range(6):
        p = s.rational_fn(4)
        W = wigner(p, p)
        herm = hermitian_conjugate(W)
        s.check(herm.entries.keys() == W.entries.keys()
                and all(abs(herm.entries[key] - W.entries[key]) < 1e-15 for key in W.entries),
                f"diagonal data hermitian[{k}]")
        mm = momentum_marginal(W)
        s.check(all(mm[m] == (c.real * c.real + c.imag * c.imag)
                    for m, c in p.terms.items()), f"momentum marginal[{k}]")
        x = s.rng.uniform(-3, 3)
        ev = cyl.eval_real(p, x)
        pm = position_marginal(W, x)
        s.check(abs(pm - (ev.real ** 2 + ev.imag ** 2)) < 1e-10, f"position marginal[{k}]")
    # a two-character state has a strictly negative realization slice
    two = cyl.add(cyl.character(0), cyl.character(1))
    sl = cyl.dual_slice(realization(wigner(two, two)), Fraction(1, 2))
    low = min(cyl.eval_real(sl, 2 * math.pi * t / 999).real for t in range(1000))
    s.check(low <= -0.5, "interference slice attains negative values")
    for k in range(5):
        g1, g2 = s.gaussian(), s.gaussian()
        DW = wigner_dual(g1, g2)
        nu0 = Fraction(s.rng.randint(-6, 6), 2)
        mu0 = Fraction(s.rng.randint(-6, 6), 2)
        F = cyl.tensor_delta(cyl.character(-nu0), mu0)
        s.check(abs(wigner_pair(DW, F) - DW.value(nu0, mu0)) < 1e-14,
                f"pointwise vs paired evaluation[{k}]")


def _suite_gaussian_oracle(s: _Suite) -> None:
    for k in range(6):
        g = s.gaussian()
        p = s.rational_fn()
        a = duals.dual_action(g, p)
        try:
            b = duals.reduction_action(g, p, rel_tol=s.cfg.quad_tol)
        except duals.QuadratureError as err:
            s.close(f"quadrature[{k}]", err)
            continue
        s.check(abs(a - b) <= 1e-8 * max(1.0, abs(a)), f"quadrature agrees[{k}]")
    for k in range(12):
        g = s.gaussian()
        xi = s.rational_fn()
        mu0 = Fraction(s.rng.randint(-4, 4))
        val = duals.gaussian_wigner_pair_positive(g, xi, mu0)
        s.check(val >= -1e-10, f"diagonal pairing nonnegative[{k}] got {val}")
    for k in range(6):
        g, p = s.gaussian(), s.rational_fn()
        lhs = duals.dual_action(g, cyl.conjugate(p))
        rhs = sum(g.coeff(m) * c.conjugate() for m, c in sorted(p.terms.items()))
        s.check(abs(lhs - rhs) < 1e-13 * max(1.0, abs(rhs)), f"coefficient pairing[{k}]")


def _suite_quantization(s: _Suite) -> None:
    for k in range(8):
        mu0 = Fraction(s.rng.randint(-8, 8), s.rng.randint(1, 4))
        p1, p2 = s.rational_fn(), s.rational_fn()
        for sym in (weyl.symbol_character(mu0), weyl.symbol_momentum(),
                    weyl.symbol_symmetric(mu0)):
            lhs = cyl.inner_product(p1, weyl.quantize_apply(sym, p2))
            rhs = weyl.form_via_wigner(sym, p1, p2)
            s.check(abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs)),
                    f"form triangle {sym.name}[{k}]")
        beta = Fraction(s.rng.randint(-8, 8), s.rng.randint(1, 4))
        hb = cyl.character(beta)
        s.check(weyl.quantize_apply(weyl.symbol_character(mu0), hb) == cyl.shift(hb, mu0),
                f"character symbol is the shift[{k}]")
        s.check(weyl.quantize_apply(weyl.symbol_momentum(), hb) == cyl.momentum(hb),
                f"momentum symbol is the derivative[{k}]")
    for k in range(4):
        F = cyl.build_dual(cyl.RATIONAL, {
            Fraction(s.rng.randint(-4, 4), 2): s.rational_fn(),
            Fraction(s.rng.randint(-4, 4), 2) + Fraction(1, 4): s.rational_fn(),
        })
        sym = weyl.finite_symbol(F)
        adj = weyl.adjoint(sym)
        a = Fraction(s.rng.randint(-6, 6), 2)
        b = Fraction(s.rng.randint(-6, 6), 2)
        s.check(abs(weyl.matrix_element(adj, a, b)
                    - weyl.matrix_element(sym, b, a).conjugate()) < 1e-15,
                f"adjoint matrix elements[{k}]")
        p1, p2 = s.rational_fn(), s.rational_fn()
        s.check(abs(cyl.inner_product(p1, weyl.quantize_apply(sym, p2))
                    - cyl.inner_product(weyl.quantize_apply(adj, p1), p2)) < 1e-12,
                f"adjoint form identity[{k}]")
        seeds = [Fraction(0), Fraction(1, 2)]
        val = weyl.finite_section_norm(sym, seeds, 2)
        s.check(val <= weyl.schur_norm_bound(sym) + 1e-8,
                f"schur bound dominates sections[{k}]")


def _suite_holonomy(s: _Suite) -> None:
    scheme = holonomy.MubarScheme(s.cfg.area_constant)
    C = scheme.area_constant
    for k in range(200):
        beta = -30.0 + 60.0 * k / 199
        sol = holonomy.solve_S(scheme, beta)
        s.check(all(abs(holonomy.eq_residual(scheme, a, beta)) <= 1e-10 * max(1.0, C)
                    for a in sol.alphas), f"relation residual at beta={beta:.3f}")
    bc = holonomy.critical_beta(scheme)
    s.check(holonomy.solve_S(scheme, bc - 0.01).count() == 3, "three solutions below the fold")
    s.check(holonomy.solve_S(scheme, bc + 0.01).count() == 1, "one solution above the fold")
    for k in range(10):
        a = s.rng.uniform(-15, 15)
        left = holonomy.solve_S_adjoint(scheme, a).alphas
        right = tuple(sorted(-x for x in holonomy.solve_S(scheme, -a).alphas))
        s.check(len(left) == len(right)
                and all(abs(x - y) <= 1e-9 * max(1.0, abs(x)) for x, y in zip(left, right)),
                f"transposed set is the reflected set[{k}]")
    for k in range(6):
        b = s.rng.uniform(-12, 12)
        hb = cyl.character(b, kind=cyl.REAL, eps_freq=s.cfg.eps_freq)
        anti = cyl.add(cyl.parity(holonomy.sin_apply(scheme, hb)),
                       holonomy.sin_apply(scheme, cyl.parity(hb)))
        s.check(max((abs(v) for v in anti.terms.values()), default=0.0) <= 1e-9,
                f"odd part anticommutes with parity[{k}]")
        comm = cyl.add(cyl.parity(holonomy.cos_apply(scheme, hb)),
                       cyl.scale(holonomy.cos_apply(scheme, cyl.parity(hb)), -1.0))
        s.check(max((abs(v) for v in comm.terms.values()), default=0.0) <= 1e-9,
                f"even part commutes with parity[{k}]")
    for eps in (1.0, 0.1, 1.0 / 154.0):
        reg = holonomy.Regularization(eps)
        for k in range(40):
            b = s.rng.uniform(-12, 12)
            s.check(holonomy.regularized_solutions(scheme, reg, b).count() <= 5,
                    f"capped column count eps={eps:.4g} beta={b:.3f}")
            s.check(holonomy.regularized_adjoint_solutions(scheme, reg, b).count() <= 5,
                    f"capped row count eps={eps:.4g} alpha={b:.3f}")
    for beta, expect in ((0.0, 2), (-1.0, 3)):
        rep = holonomy.convergence_check(scheme, beta, [1.0 / n for n in range(1, 21)])
        s.check(rep.stable_index == expect,
                f"stabilization index at beta={beta}: got {rep.stable_index}")
    for k in range(8):
        K = s.rng.choice((0.5, 1.0, 2.0))
        psi = s.real_fn(4)
        out = holonomy.aps_apply(K, psi)
        s.check(abs(cyl.norm(out) - cyl.norm(psi)) <= 1e-12 * max(1.0, cyl.norm(psi)),
                f"shift preserves the norm[{k}]")
        roundtrip = holonomy.aps_adjoint_apply(K, out)
        s.check(len(roundtrip) == len(psi)
                and all(abs(cyl.fourier_coefficient(roundtrip, m) - v) < 1e-9
                        for m, v in psi.terms.items()),
                f"shift inverts cleanly[{k}]")
        for m in sorted(out.terms):
            pre = holonomy.volume_inverse(holonomy.volume_coordinate(m) + 1.0 / K)
            s.check(abs(holonomy.volume_coordinate(m)
                        - (holonomy.volume_coordinate(pre) - 1.0 / K)) <= 1e-10,
                    f"volume coordinate moved by -1/K[{k}]")


SUITES: Dict[str, Callable[[_Suite], None]] = {
    "character-algebra": _suite_character_algebra,
    "snapping": _suite_snapping,
    "wigner-identities": _suite_wigner_identities,
    "gaussian-oracle": _suite_gaussian_oracle,
    "quantization": _suite_quantization,
    "holonomy": _suite_holonomy,
}


def run_suites(cfg: RunConfig, only: Optional[List[str]] = None) -> dict:
    names = list(SUITES) if not only else list(only)
    report = {"seed": cfg.seed, "suites": [], "total_cases": 0, "total_failures": 0}
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
        rng = random.Random(cfg.seed + crc32(name.encode("utf-8")))
        suite = _Suite(cfg, rng)
        try:
            SUITES[name](suite)
        except Exception as err:  # a crash is a failure, not a stack trace
            suite.close(name, err)
        report["suites"].append({
            "suite": name,
            "cases": suite.cases,
            "failures": suite.failures,
        })
        report["total_cases"] += suite.cases
        report["total_failures"] += len(suite.failures)
    return report
