"""Command-line front end.

Subcommands: figures, verify, solve, wigner, quantize, convergence, norm.
Exit codes: 0 success, 1 a check or computation failed, 2 usage or input
error.  All emitted files are deterministic for a fixed configuration:
CSV numbers carry 17 significant digits and every output records the seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import cyl, holonomy, weyl
from .config import OUTDIR_ENV, RunConfig, resolve_config
from .duals import QuadratureError
from .verify import SUITES, run_suites
from .weyl import PowerIterationError, SymbolContractError
from .wigner import momentum_marginal, realization_value, wigner

_FLAG_FIELDS = ("outdir", "seed", "eps_freq", "eps_coeff", "quad_tol",
                "area_constant", "mu0", "aps_k")

# input problems exit 2; failures of the mathematics or its numerics exit 1
_USAGE_ERRORS = (cyl.SchemaError, cyl.FrequencyKindError, json.JSONDecodeError,
                 OSError, ValueError, KeyError)
_RUNTIME_ERRORS = (QuadratureError, PowerIterationError, SymbolContractError)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _freq_token(tok: str):
    """Frequency literal: 'p/q' or an integer is exact, anything else real."""
    tok = tok.strip()
    if "/" in tok:
        return Fraction(tok)
    try:
        return Fraction(int(tok))
    except ValueError:
        return float(tok)


def _float_token(tok: str) -> float:
    tok = tok.strip()
    return float(Fraction(tok)) if "/" in tok else float(tok)


def _load_cyl(path: str, cfg: RunConfig) -> cyl.CylFunction:
    with open(path, "r", encoding="utf-8") as fh:
        return cyl.from_json(fh.read(), cfg.eps_freq, cfg.eps_coeff)


def _emit(doc: dict | list, out_path: Optional[str]) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_symbol(token: str, cfg: RunConfig) -> weyl.Symbol:
    """Named operator symbols: sigma1:MU0, sigma2, sigma3:MU0, e, e_aps:K, e_reg:EPS."""
    name, _, arg = token.partition(":")
    scheme = holonomy.MubarScheme(cfg.area_constant)
    if name == "sigma1":
        mu0 = _freq_token(arg) if arg else cfg.mu0
        return weyl.symbol_character(mu0, cfg.eps_freq)
    if name == "sigma2":
        return weyl.symbol_momentum(cfg.eps_freq)
    if name == "sigma3":
        mu0 = _freq_token(arg) if arg else cfg.mu0
        return weyl.symbol_symmetric(mu0, cfg.eps_freq)
    if name == "e":
        return holonomy.holonomy_symbol(scheme, cfg.eps_freq)
    if name == "e_aps":
        K = _float_token(arg) if arg else cfg.aps_k
        if K is None:
            raise ValueError("e_aps needs a shift constant: e_aps:K or --aps-k")
        return holonomy.aps_symbol(K, cfg.eps_freq)
    if name == "e_reg":
        if not arg:
            raise ValueError("e_reg needs a window size: e_reg:EPS")
        reg = holonomy.Regularization(_float_token(arg))
        return holonomy.regularized_symbol(scheme, reg, cfg.eps_freq)
    raise ValueError(
        f"unknown symbol {token!r}; expected sigma1:MU0, sigma2, sigma3:MU0, "
        "e, e_aps:K or e_reg:EPS")


# ---------------------------------------------------------------------------
# subcommands


def _write_graph_csv(path: str, rows: Sequence[holonomy.GraphPoint], seed: int) -> None:
    lines = [f"# seed={seed}", "operator,alpha,beta,branch"]
    lines.extend(f"{p.operator},{_fmt(p.alpha)},{_fmt(p.beta)},{p.branch}" for p in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


_GNUPLOT = """\
# Run from this directory:  gnuplot figures.gp
set datafile separator comma
set terminal pngcairo size 1000,700
set key outside
set xlabel "input frequency (column beta)"
set ylabel "output frequency (column alpha)"

set output "e_graph.png"
plot "e_graph.csv" using 3:(strcol(4) eq "curve" ? $2 : NaN) \\
         with points pt 7 ps 0.15 lc rgb "#999999" title "relation curve", \\
     "e_graph.csv" using 3:(strcol(4) eq "outer-plus" ? $2 : NaN) \\
         with points pt 7 ps 0.3 lc rgb "#1f77b4" title "branch (i)", \\
     "e_graph.csv" using 3:(strcol(4) eq "outer-minus" ? $2 : NaN) \\
         with points pt 7 ps 0.3 lc rgb "#d62728" title "branch (ii)"

set output "e_aps_graph.png"
plot "e_aps_graph.csv" using 3:(strcol(4) eq "curve" ? $2 : NaN) \\
         with lines lw 2 title "unitary shift"

set output "h_mu0_graph.png"
plot "h_mu0_graph.csv" using 3:(strcol(4) eq "line" ? $2 : NaN) \\
         with lines lw 2 title "frequency shift"

set output "comparison.png"
plot "comparison.csv" using 3:(strcol(1) eq "e" ? $2 : NaN) \\
         with points pt 7 ps 0.2 title "holonomy", \\
     "comparison.csv" using 3:(strcol(1) eq "e_aps" ? $2 : NaN) \\
         with points pt 5 ps 0.2 title "unitary shift", \\
     "comparison.csv" using 3:(strcol(1) eq "h" ? $2 : NaN) \\
         with points pt 9 ps 0.2 title "character shift"

set output "e_branches.png"
plot "e_branches.csv" using 3:(strcol(4) eq "solid" ? $2 : NaN) \\
         with points pt 7 ps 0.3 title "main branch (solid)", \\
     "e_branches.csv" using 3:(strcol(4) eq "dashed" ? $2 : NaN) \\
         with points pt 6 ps 0.3 title "spike branch (dashed)"
"""


def _cmd_figures(args, cfg: RunConfig) -> int:
    if cfg.aps_k is None:
        print("error: figures needs the shift constant; pass --aps-k or set it "
              "in the config file", file=sys.stderr)
        return 2
    scheme = holonomy.MubarScheme(cfg.area_constant)
    lo, hi, n = args.beta_min, args.beta_max, args.samples
    if n <= 0:
        e_rows: List[holonomy.GraphPoint] = []
        aps_rows: List[holonomy.GraphPoint] = []
        h_rows: List[holonomy.GraphPoint] = []
    else:
        e_rows = holonomy.graph_points_e(scheme, lo, hi, n)
        aps_rows = holonomy.graph_points_aps(cfg.aps_k, lo, hi, n)
        h_rows = holonomy.graph_points_character(cfg.mu0, lo, hi, n)
    style = {holonomy.BRANCH_PLUS: "solid", holonomy.BRANCH_MINUS: "dashed"}
    branch_rows = [
        holonomy.GraphPoint(p.operator, p.alpha, p.beta, style[p.branch])
        for p in e_rows if p.branch in style
    ]
    os.makedirs(cfg.outdir, exist_ok=True)
    outputs = [
        ("e_graph.csv", e_rows),
        ("e_aps_graph.csv", aps_rows),
        ("h_mu0_graph.csv", h_rows),
        ("comparison.csv", e_rows + aps_rows + h_rows),
        ("e_branches.csv", branch_rows),
    ]
    for fname, rows in outputs:
        _write_graph_csv(os.path.join(cfg.outdir, fname), rows, cfg.seed)
    gp_path = os.path.join(cfg.outdir, "figures.gp")
    with open(gp_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# seed={cfg.seed}\n" + _GNUPLOT)
    for fname, _ in outputs:
        print(os.path.join(cfg.outdir, fname))
    print(gp_path)
    return 0


def _cmd_verify(args, cfg: RunConfig) -> int:
    report = run_suites(cfg, only=args.suite or None)
    _emit(report, None)
    if args.report:
        _emit(report, args.report)
    return 1 if report["total_failures"] else 0


def _solution_rows(scheme, reg, sol, given: float, transposed: bool) -> list:
    rows = []
    for a, tag in zip(sol.alphas, sol.branches):
        if reg is None:
            resid = abs(holonomy.eq_residual(scheme, a, given))
        elif transposed:
            resid = abs((given - a) - holonomy.cap_value(scheme, reg, (given + a) / 2.0))
        else:
            resid = abs((a - given) - holonomy.cap_value(scheme, reg, (a + given) / 2.0))
        rows.append({"alpha": a, "residual": resid, "branch": tag})
    return rows


def _cmd_solve(args, cfg: RunConfig) -> int:
    scheme = holonomy.MubarScheme(cfg.area_constant)
    if args.epsilon is None:
        reg = None
        sol = (holonomy.solve_S_adjoint if args.adjoint else holonomy.solve_S)(
            scheme, args.beta)
    else:
        reg = holonomy.Regularization(args.epsilon)
        fn = (holonomy.regularized_adjoint_solutions if args.adjoint
              else holonomy.regularized_solutions)
        sol = fn(scheme, reg, args.beta)
    _emit(_solution_rows(scheme, reg, sol, args.beta, args.adjoint), None)
    return 0


def _freq_json(f):
    return str(f) if isinstance(f, Fraction) else float(f)


def _cmd_wigner(args, cfg: RunConfig) -> int:
    psi = _load_cyl(args.psi, cfg)
    diagonal = args.phi is None
    phi = psi if diagonal else _load_cyl(args.phi, cfg)
    W = wigner(psi, phi)
    doc = {
        "seed": cfg.seed,
        "kind": W.kind,
        "entries": [
            {"mu": _freq_json(mu), "nu": _freq_json(nu), "re": v.real, "im": v.imag}
            for (mu, nu), v in sorted(W.entries.items())
        ],
    }
    if diagonal:
        doc["momentum_marginal"] = [
            {"mu": _freq_json(m), "value": v}
            for m, v in sorted(momentum_marginal(W).items())
        ]
    if args.grid > 0:
        mus = sorted({mu for mu, _ in W.entries})
        xs = [2.0 * math.pi * k / args.grid for k in range(args.grid)]
        doc["realization"] = [
            {"mu": _freq_json(mu),
             "values": [
                 {"x": x, "re": realization_value(W, x, mu).real,
                  "im": realization_value(W, x, mu).imag}
                 for x in xs
             ]}
            for mu in mus
        ]
    _emit(doc, args.out)
    return 0


def _cmd_quantize(args, cfg: RunConfig) -> int:
    sym = _build_symbol(args.symbol, cfg)
    psi = _load_cyl(args.state, cfg)
    if sym.kind == cyl.REAL and psi.kind == cyl.RATIONAL:
        psi = cyl.promote_to_real(psi)
    result = weyl.quantize_apply(sym, psi)
    _emit({"seed": cfg.seed, **cyl.to_json_dict(result)}, args.out)
    return 0


def _cmd_convergence(args, cfg: RunConfig) -> int:
    scheme = holonomy.MubarScheme(cfg.area_constant)
    epsilons = [1.0 / k for k in range(1, args.max_n + 1)]
    rep = holonomy.convergence_check(scheme, args.beta, epsilons)
    _emit({
        "beta": rep.beta,
        "epsilons": list(rep.epsilons),
        "N": rep.stable_index,
        "spurious": [list(w) for w in rep.spurious],
    }, None)
    return 0 if rep.stable_index is not None else 1


def _cmd_norm(args, cfg: RunConfig) -> int:
    sym = _build_symbol(args.symbol, cfg)
    if sym.kind == cyl.REAL:
        seeds = [_float_token(t) for t in args.seeds.split(",")]
    else:
        seeds = [Fraction(t.strip()) for t in args.seeds.split(",")]
    try:
        schur = weyl.schur_norm_bound(sym)
    except ValueError:
        schur = None
    sections = []
    for radius in range(1, args.radius + 1):
        freqs = weyl.section_frequencies(sym, seeds, radius)
        sections.append({
            "radius": radius,
            "size": len(freqs),
            "norm": weyl.finite_section_norm(sym, seeds, radius),
        })
    _emit({"symbol": sym.name, "schur_bound": schur, "sections": sections}, None)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("configuration (flags > config file > defaults)")
    g.add_argument("--config", metavar="FILE", help="JSON config file")
    g.add_argument("--outdir", help=f"output directory (default: ${OUTDIR_ENV} or .)")
    g.add_argument("--seed", type=int, help="seed for randomized sweeps")
    g.add_argument("--eps-freq", type=float, dest="eps_freq",
                   help="real-frequency identification tolerance")
    g.add_argument("--eps-coeff", type=float, dest="eps_coeff",
                   help="relative coefficient drop tolerance")
    g.add_argument("--quad-tol", type=float, dest="quad_tol",
                   help="quadrature stabilization tolerance")
    g.add_argument("--area-constant", type=float, dest="area_constant",
                   help="area gap constant of the step function")
    g.add_argument("--mu0", type=float, help="frequency of the reference character")
    g.add_argument("--aps-k", type=float, dest="aps_k",
                   help="shift constant of the unitary volume-shift operator")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="bohrwigner",
        description="Phase-space calculus on the compactified line: figure data, "
                    "identity suites, solvers, and operator application.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _common_flags()

    p = sub.add_parser("figures", parents=[common],
                       help="write graph CSVs and a gnuplot script")
    p.add_argument("--beta-min", type=float, default=-20.0)
    p.add_argument("--beta-max", type=float, default=20.0)
    p.add_argument("--samples", type=int, default=2000,
                   help="grid points per graph (<= 0 writes empty files)")

    p = sub.add_parser("verify", parents=[common],
                       help="run the seeded identity suites, print a JSON report")
    p.add_argument("--suite", action="append", choices=list(SUITES),
                   help="restrict to one suite (repeatable)")
    p.add_argument("--report", metavar="FILE", help="also write the report here")

    p = sub.add_parser("solve", parents=[common],
                       help="solutions of the holonomy frequency relation")
    p.add_argument("beta", type=float)
    p.add_argument("--epsilon", type=float,
                   help="solve the capped relation with this window size")
    p.add_argument("--adjoint", action="store_true",
                   help="solve the transposed relation")

    p = sub.add_parser("wigner", parents=[common],
                       help="phase-space data of one or two states")
    p.add_argument("psi", metavar="PSI_FILE")
    p.add_argument("phi", nargs="?", metavar="PHI_FILE")
    p.add_argument("--grid", type=int, default=0,
                   help="also evaluate each slice on this many line points")
    p.add_argument("--out", metavar="FILE", help="write JSON here instead of stdout")

    p = sub.add_parser("quantize", parents=[common],
                       help="apply a named operator symbol to a state file")
    p.add_argument("symbol", help="sigma1:MU0 | sigma2 | sigma3:MU0 | e | e_aps:K | e_reg:EPS")
    p.add_argument("state", metavar="STATE_FILE")
    p.add_argument("--out", metavar="FILE")

    p = sub.add_parser("convergence", parents=[common],
                       help="stabilization of the capped operator on a character")
    p.add_argument("beta", type=float)
    p.add_argument("--max-n", type=int, default=200, dest="max_n",
                   help="test window sizes 1/1 .. 1/N")

    p = sub.add_parser("norm", parents=[common],
                       help="finite-section norms and the row/column bound")
    p.add_argument("symbol")
    p.add_argument("--radius", type=int, default=5,
                   help="number of widening sections")
    p.add_argument("--seeds", default="0",
                   help="comma-separated seed frequencies for the sections")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    dispatch = {
        "figures": _cmd_figures,
        "verify": _cmd_verify,
        "solve": _cmd_solve,
        "wigner": _cmd_wigner,
        "quantize": _cmd_quantize,
        "convergence": _cmd_convergence,
        "norm": _cmd_norm,
    }
    try:
        cfg = resolve_config(args.config, {f: getattr(args, f) for f in _FLAG_FIELDS})
        return dispatch[args.command](args, cfg)
    except _RUNTIME_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except _USAGE_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
