"""Command-line front end: verification, runs, tables, spectra.

Every command emits either a short text report or a CSV whose first lines
are ``#``-prefixed comments recording the fully resolved configuration, so
identical invocations produce byte-identical files.

Exit codes: 0 success, 1 validation failure (bad flags, rejected inputs),
2 numerical non-convergence or a failed numerical check.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .boundary import BoundarySpec
from .energy import dissipation_and_boundary_form, verify_energy_balance
from .rng import Xoshiro256StarStar
from .scheme import (BUILTIN_SCHEMES, SchemeStencil, check_l2_stability,
                     consistency_order, format_stencil, make_builtin,
                     parse_stencil)
from .solver import (GridSpec, PowerPlusDatum, convergence_study, n_steps,
                     reference_values, run_interval)
from .spectral import (ConvergenceError, assemble_transition_matrix,
                       operator_norm_l2, pseudospectrum_grid, spectral_radius)

NAMED_DATA = {
    "u01": (0.5, 3.0),
    "u02": (0.5, 2.6),
    "u03": (0.5, 2.5),
}


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _resolve_datum(text: str) -> PowerPlusDatum:
    key = text.strip().lower()
    if key in NAMED_DATA:
        c, alpha = NAMED_DATA[key]
        return PowerPlusDatum(c=c, alpha=alpha)
    if key.startswith("power:"):
        parts = key.split(":")
        if len(parts) != 3:
            raise ValueError(f"datum {text!r} must look like power:c:alpha")
        return PowerPlusDatum(c=float(parts[1]), alpha=float(parts[2]))
    raise ValueError(
        f"unknown datum {text!r}; use one of {sorted(NAMED_DATA)} or "
        "power:c:alpha"
    )


def _resolve_stencil(args, enforce_cfl: bool = True) -> SchemeStencil:
    name = args.scheme
    key = name.strip().lower().replace("-", "_")
    if key in BUILTIN_SCHEMES:
        a = 1.0 if args.a is None else args.a
        lam = 0.7 if args.lam is None else args.lam
        return make_builtin(key, a, lam, enforce_cfl=enforce_cfl)
    stencil = parse_stencil(name)
    if args.a is not None and args.a != stencil.velocity_a:
        raise ValueError("--a conflicts with the vel= value in --scheme")
    if args.lam is not None and args.lam != stencil.lam:
        raise ValueError("--lambda conflicts with the lambda= value in --scheme")
    return stencil


def _parse_int_list(text: str) -> list[int]:
    vals = [int(tok) for tok in text.split(",") if tok.strip()]
    if not vals:
        raise ValueError("empty integer list")
    return vals


def _emit(args, lines: list[str]) -> None:
    payload = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _csv_lines(header: dict, columns: list[str],
               rows: list[tuple]) -> list[str]:
    lines = [f"# {k}={v}" for k, v in header.items()]
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return lines


def _config_header(args, stencil: SchemeStencil, **extra) -> dict:
    header = {
        "command": args.command,
        "scheme": format_stencil(stencil),
    }
    header.update(extra)
    return header


def cmd_verify(args) -> int:
    stencil = _resolve_stencil(args, enforce_cfl=False)
    report = consistency_order(stencil)
    stab = check_l2_stability(stencil)
    lines = [f"scheme {format_stencil(stencil)}"]
    failures = []
    order_txt = str(report.order) + (" (capped)" if report.capped else "")
    lines.append(f"consistency order {order_txt}")
    if report.order < 1:
        failures.append(f"consistency order {report.order} < 1 "
                        f"(moment {report.failed_moment} fails)")
    verdict = "stable" if stab.is_stable else "UNSTABLE"
    lines.append(f"l2 symbol max modulus {stab.max_modulus!r} "
                 f"at theta={stab.argmax_theta!r}: {verdict}")
    if not stab.is_stable:
        failures.append("amplification symbol exceeds modulus 1")
    if report.order >= 1:
        d, Q = dissipation_and_boundary_form(stencil)
        la = stencil.lam * stencil.velocity_a
        lines.append("dissipation coefficients "
                     + " ".join(repr(float(x)) for x in d))
        lines.append(f"boundary form center value {Q.center_value()!r} "
                     f"(target {-la!r})")
    else:
        lines.append("boundary certificate skipped "
                     "(needs first-order consistency)")
    for f in failures:
        lines.append(f"FAIL: {f}")
    if not failures:
        lines.append("all checks passed")
    _emit(args, lines)
    return 0 if not failures else 1


def cmd_run(args) -> int:
    stencil = _resolve_stencil(args)
    datum = _resolve_datum(args.datum)
    if args.J is None:
        raise ValueError("run needs --J")
    grid = GridSpec(L=args.L, J=args.J, lam=stencil.lam)
    kbs = args.kb
    N = n_steps(args.T, grid.dt)
    t_final = N * grid.dt
    numeric = {}
    for kb in kbs:
        run = run_interval(datum, grid, stencil, BoundarySpec(kb), args.T,
                           record="final", convention=args.convention)
        numeric[kb] = run.final_state.interior
    exact = reference_values(datum, grid, t_final, stencil.velocity_a,
                             args.convention)
    x_mid = grid.cell_midpoints
    single = len(kbs) == 1
    columns = ["x_mid"]
    columns += ["numeric" if single else f"numeric_kb{kb}" for kb in kbs]
    columns += ["exact"]
    columns += ["error" if single else f"error_kb{kb}" for kb in kbs]
    rows = []
    for i in range(grid.J):
        row = [x_mid[i]]
        row += [numeric[kb][i] for kb in kbs]
        row += [exact[i]]
        row += [numeric[kb][i] - exact[i] for kb in kbs]
        rows.append(tuple(row))
    header = _config_header(
        args, stencil, L=args.L, J=args.J, kb=",".join(map(str, kbs)),
        T=args.T, n_steps=N, t_final=repr(t_final), datum=args.datum,
        convention=args.convention,
    )
    _emit(args, _csv_lines(header, columns, rows))
    return 0


def cmd_convergence(args) -> int:
    stencil = _resolve_stencil(args)
    datum = _resolve_datum(args.datum)
    if args.J_list is None:
        raise ValueError("convergence needs --J-list")
    if len(args.kb) != 1:
        raise ValueError("convergence takes exactly one --kb value")
    kb = args.kb[0]
    rows = convergence_study(datum, stencil, kb, args.J_list, args.T,
                             L=args.L, convention=args.convention)
    header = _config_header(
        args, stencil, L=args.L, J_list=",".join(map(str, args.J_list)),
        kb=kb, T=args.T, datum=args.datum, convention=args.convention,
    )
    table = [(row.J, row.dx, row.error_final, row.error_sup,
              row.observed_order) for row in rows]
    _emit(args, _csv_lines(
        header, ["J", "dx", "error_final", "error_sup", "observed_order"],
        table))
    return 0


def cmd_spectral(args) -> int:
    stencil = _resolve_stencil(args)
    if args.J_list is not None:
        J_values = args.J_list
    elif args.J is not None:
        J_values = [args.J]
    else:
        raise ValueError("spectral needs --J or --J-list")
    kbs = args.kb
    if args.pseudospectrum:
        if len(J_values) != 1 or len(kbs) != 1:
            raise ValueError("--pseudospectrum takes a single J and kb")
        J, kb = J_values[0], kbs[0]
        matrix = assemble_transition_matrix(J, stencil, kb)
        grid = pseudospectrum_grid(matrix, resolution=args.res)
        header = _config_header(
            args, stencil, J=J, kb=kb, res=args.res,
            re_range="-1.5,1.5", im_range="-1.5,1.5",
        )
        rows = [(grid.re[k], grid.im[i], grid.sigma[i, k])
                for i in range(args.res) for k in range(args.res)]
        _emit(args, _csv_lines(header, ["re", "im", "sigma_min"], rows))
        return 0
    rows = []
    for kb in kbs:
        for J in J_values:
            matrix = assemble_transition_matrix(J, stencil, kb)
            rho = spectral_radius(matrix)
            # nine digits are plenty for a printed report and avoid
            # stalling the norm iteration on clustered singular values
            norm = operator_norm_l2(matrix, rtol=1e-9)
            rows.append((J, kb, rho, norm))
    header = _config_header(
        args, stencil, J_list=",".join(map(str, J_values)),
        kb=",".join(map(str, kbs)),
    )
    _emit(args, _csv_lines(header, ["J", "kb", "rho", "norm"], rows))
    return 0


def cmd_energy_check(args) -> int:
    stencil = _resolve_stencil(args, enforce_cfl=False)
    gen = Xoshiro256StarStar(args.seed)
    stab = check_l2_stability(stencil)
    max_residual = 0.0
    max_rhs = -float("inf")
    for _ in range(args.trials):
        length = 5 + gen.integer(28)
        seq = gen.symmetric(length)
        lhs, rhs, residual = verify_energy_balance(stencil, seq, strict=False)
        scale = max(1.0, float(np.dot(seq, seq)))
        max_residual = max(max_residual, residual / scale)
        max_rhs = max(max_rhs, rhs)
    lines = [
        f"scheme {format_stencil(stencil)}",
        f"trials {args.trials} seed {args.seed}",
    ]
    if args.trials == 0:
        lines.append("no trials requested; nothing to check")
        _emit(args, lines)
        return 0
    lines.append(f"max relative balance residual {max_residual!r}")
    lines.append(f"max dissipation sum {max_rhs!r}")
    failed = False
    if max_residual > 1e-12:
        lines.append("FAIL: balance residual exceeds 1e-12")
        failed = True
    if stab.is_stable:
        if max_rhs > 1e-12:
            lines.append("FAIL: positive dissipation sum for a stable scheme")
            failed = True
        else:
            lines.append("dissipation nonpositive on all trials (stable scheme)")
    elif max_rhs > 1e-12:
        lines.append("dissipation sum positive on some trials "
                     "(expected: scheme is not l2-stable)")
    _emit(args, lines)
    return 2 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transportbc",
        description="Finite-difference transport schemes with extrapolation "
                    "outflow boundaries: verification, runs, tables, spectra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p) -> None:
        p.add_argument("--scheme", default="lax_wendroff",
                       help="builtin name or a custom stencil string "
                            "'r=..,p=..,a=-1:..,0:..;vel=..;lambda=..'")
        p.add_argument("--a", type=float, default=None,
                       help="transport velocity (builtins only, default 1)")
        p.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="time-step ratio dt/dx (builtins only, "
                            "default 0.7)")
        p.add_argument("--out", default=None, help="output path (default "
                                                   "stdout)")

    def add_grid(p) -> None:
        p.add_argument("--L", type=float, default=1.0)
        p.add_argument("--J", type=int, default=None)
        p.add_argument("--J-list", dest="J_list", type=_parse_int_list,
                       default=None, help="comma-separated cell counts")
        p.add_argument("--kb", type=_parse_int_list, default=[1],
                       help="extrapolation order(s), comma-separated")
        p.add_argument("--T", type=float, default=0.5)
        p.add_argument("--datum", default="u01")
        p.add_argument("--convention", default="midpoint",
                       choices=["midpoint", "cell_average"])
        p.add_argument("--record", default="sup",
                       choices=["final", "sup", "history"])

    p = sub.add_parser("verify", help="consistency, stability, and "
                                      "boundary-certificate report")
    add_common(p)

    p = sub.add_parser("run", help="solution dump at the first step at or "
                                   "past T")
    add_common(p)
    add_grid(p)

    p = sub.add_parser("convergence", help="refinement table of errors and "
                                           "observed orders")
    add_common(p)
    add_grid(p)

    p = sub.add_parser("spectral", help="transition-matrix radius/norm "
                                        "report or pseudospectrum grid")
    add_common(p)
    add_grid(p)
    p.add_argument("--pseudospectrum", action="store_true")
    p.add_argument("--res", type=int, default=64,
                   help="pseudospectrum grid resolution per axis")

    p = sub.add_parser("energy-check", help="randomized energy-identity "
                                            "verification")
    add_common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    return parser


_COMMANDS = {
    "verify": cmd_verify,
    "run": cmd_run,
    "convergence": cmd_convergence,
    "spectral": cmd_spectral,
    "energy-check": cmd_energy_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"numerical check failed: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
