"""``beamforge`` command line: enumeration, verification, sweeps, export.

Exit codes: 0 on success, 2 on a validation error (bad input), 3 on a
verification failure (an emitted solution missed its residual bound,
which means a bug, and is surfaced loudly).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import jsonio
from .bimodal import bstar_pairs, enumerate_general_bimodal
from .core import (
    ModalSolution,
    Params,
    cubic_check,
    modal_residual,
    solution_sort_key,
)
from .convert import PhysicalParams, dimensionless_params
from .ee_families import enumerate_ee_families, sample_family
from .errors import ValidationError, VerificationError
from .modesets import effective_modes, mu_value, nu_value, trimodal_ee_triples, bimodal_ee_pairs
from .oracle import galerkin_solve, match_against
from .single_beam import enumerate_foundation, enumerate_plain
from .spectrum import Spectrum
from .unimodal import amplitude_curves, enumerate_unimodal

CUBIC_TOL = 1e-9


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--beta", type=float, default=0.0, help="axial load parameter (negative compresses)")
    common.add_argument("--varrho", type=float, default=1.0, help="extensibility coefficient, positive")
    common.add_argument("--k", type=float, default=1.0, help="coupling stiffness ratio, positive")
    common.add_argument(
        "--spectrum",
        default="dirichlet",
        help="eigenvalue generator: dirichlet | scaled | power:p | file:<path>",
    )
    common.add_argument("--nmax", type=int, default=64, help="enumeration cap on mode indices")
    common.add_argument("--tol-cond", type=float, default=1e-9, dest="tol_cond",
                        help="relative tolerance for resonance equalities")
    common.add_argument("--tol-res", type=float, default=1e-10, dest="tol_res",
                        help="relative residual bound for verification")
    common.add_argument("--seed", type=int, default=0, help="random seed for sampling")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON (default)")
    fmt.add_argument("--csv", action="store_true", help="emit CSV where supported")
    common.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="beamforge",
        description="Closed-form steady states of coupled extensible double beams, "
        "with residual verification and a brute-force cross-check.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("sets", parents=[common], help="effective-mode partition and resonant index sets")

    p_uni = sub.add_parser("unimodal", parents=[common], help="single-mode solutions; CSV gives amplitude-vs-compression branches")
    p_uni.add_argument("--mode", type=int, default=1, help="mode index for the CSV branch table")
    p_uni.add_argument("--grid", default=None, help="compression grid lo:hi:count (in -beta) for the CSV")
    p_uni.add_argument("--gnuplot", type=Path, default=None, help="also write a gnuplot script next to the CSV")

    p_enum = sub.add_parser("enumerate", parents=[common], help="full solution inventory with verification block")
    p_enum.add_argument("--samples", type=int, default=0, help="verified samples to draw per EE family")
    p_enum.add_argument("--pairs", action="append", default=None, metavar="N1,N2",
                        help="restrict the bimodal scan to these pairs (repeatable)")

    p_single = sub.add_parser("single", parents=[common], help="single-beam comparison models")
    p_single.add_argument("--model", choices=("plain", "foundation"), required=True)

    p_oracle = sub.add_parser("oracle", parents=[common], help="brute-force Galerkin solve and matching report")
    p_oracle.add_argument("--modes", type=int, default=3, help="Galerkin truncation order N")
    p_oracle.add_argument("--starts", type=int, default=2000, help="number of random starts")
    p_oracle.add_argument("--backend", choices=("numba", "numpy"), default=None,
                          help="kernel backend override (default: numba when available)")

    p_sweep = sub.add_parser("sweep", parents=[common], help="branch coefficients over a compression grid (CSV)")
    p_sweep.add_argument("--grid", default="0:20:41", help="compression grid lo:hi:count (in -beta)")
    p_sweep.add_argument("--track", default=None, metavar="N,N,...",
                         help="modes to track (default: all effective at max compression)")
    p_sweep.add_argument("--pairs", action="append", default=None, metavar="N1,N2",
                         help="also track these bimodal pairs (repeatable)")
    p_sweep.add_argument("--gnuplot", type=Path, default=None, help="also write a gnuplot script")

    p_conv = sub.add_parser("convert", help="physical beam data -> dimensionless parameters")
    p_conv.add_argument("--ell", type=float, required=True, help="natural length")
    p_conv.add_argument("--h", type=float, required=True, help="thickness")
    p_conv.add_argument("--E", type=float, required=True, dest="E_mod", help="Young modulus")
    p_conv.add_argument("--nu", type=float, required=True, dest="nu_poisson", help="Poisson ratio")
    p_conv.add_argument("--D", type=float, required=True, dest="D_axial", help="axial end displacement")
    p_conv.add_argument("--kappa", type=float, required=True, dest="kappa_core", help="core stiffness")
    p_conv.add_argument("--area", type=float, required=True, dest="omega_area", help="cross-section area")
    p_conv.add_argument("--rho", type=float, default=None, dest="rho_density", help="mass density (optional)")
    p_conv.add_argument("--out", type=Path, default=None)

    return parser


def _context(args) -> tuple[Params, Spectrum]:
    return (
        Params(beta=args.beta, varrho=args.varrho, k=args.k),
        Spectrum.from_token(args.spectrum, n_max=args.nmax),
    )


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _parse_grid(token: str) -> list[float]:
    try:
        lo_s, hi_s, count_s = token.split(":")
        lo, hi, count = float(lo_s), float(hi_s), int(count_s)
    except ValueError as exc:
        raise ValidationError(f"bad grid {token!r}, expected lo:hi:count") from exc
    if count < 0:
        raise ValidationError("grid count must be nonnegative")
    if count == 0:
        return []
    if count == 1:
        return [lo]
    stepw = (hi - lo) / (count - 1)
    return [lo + i * stepw for i in range(count)]


def _parse_pairs(tokens) -> list[tuple[int, int]] | None:
    if not tokens:
        return None
    pairs = []
    for token in tokens:
        try:
            n1, n2 = (int(x) for x in token.split(","))
        except ValueError as exc:
            raise ValidationError(f"bad pair {token!r}, expected N1,N2") from exc
        if not 0 < n1 < n2:
            raise ValidationError(f"pair {token!r} must be strictly increasing and positive")
        pairs.append((n1, n2))
    return pairs


def _verify(solutions, samples, p, spec, tol_res) -> dict:
    """Tag-blind verification block over every emitted solution."""
    max_res = 0.0
    max_cubic = 0.0
    for sol in list(solutions) + list(samples):
        max_res = max(max_res, modal_residual(sol, p, spec).relative)
        if not sol.is_trivial:
            max_cubic = max(max_cubic, cubic_check(sol, p, spec).max_relative)
    passed = max_res <= tol_res and max_cubic <= CUBIC_TOL
    return {
        "max_relative_residual": max_res,
        "max_cubic_relative": max_cubic,
        "residual_tolerance": tol_res,
        "cubic_tolerance": CUBIC_TOL,
        "passed": passed,
    }


def cmd_sets(args) -> int:
    p, spec = _context(args)
    part = effective_modes(p, spec)
    boundaries = {
        "lambda": [spec.eigenvalue(n) for n in part.E],
        "mu": [mu_value(spec.eigenvalue(n), p.k) for n in part.E],
        "nu": [nu_value(spec.eigenvalue(n), p.k) for n in part.E],
    }
    doc = {
        "params": p.describe(),
        "spectrum": spec.describe(),
        "sets": part.describe(),
        "boundaries": boundaries,
        "B1": [list(pair) for pair, kind in bimodal_ee_pairs(p, spec, args.tol_cond) if kind == "B1"],
        "B2": [list(pair) for pair, kind in bimodal_ee_pairs(p, spec, args.tol_cond) if kind == "B2"],
        "T": [list(t) for t in trimodal_ee_triples(p, spec, args.tol_cond)],
        "Bstar": [{"pair": list(pair), "kind": kind} for pair, kind in bstar_pairs(p, spec)],
    }
    _write(jsonio.dumps(doc), args.out)
    return 0


def cmd_unimodal(args) -> int:
    p, spec = _context(args)
    if args.csv:
        grid_token = args.grid or f"0:{max(1.0, -p.beta)}:101"
        grid = _parse_grid(grid_token)
        header = ["minus_beta"]
        for i in (1, 2, 3, 4):
            header += [f"alpha{i}_plus", f"alpha{i}_minus"]
        rows = []
        for mb in grid:
            pb = Params(beta=-mb, varrho=p.varrho, k=p.k)
            curves = amplitude_curves(pb, spec, args.mode)
            row: list = [mb]
            for i in (1, 2, 3, 4):
                a = curves[i]
                row += [a, -a if a is not None else None]
            rows.append(row)
        text = jsonio.csv_text(header, rows)
        _write(text, args.out)
        if args.gnuplot is not None and args.out is not None:
            args.gnuplot.write_text(_gnuplot_script(args.out, header), encoding="utf-8")
        return 0
    sols = enumerate_unimodal(p, spec)
    doc = {
        "params": p.describe(),
        "spectrum": spec.describe(),
        "count": len(sols),
        "solutions": [s.to_json_dict(p, spec) for s in sols],
        "verification": _verify(sols, [], p, spec, args.tol_res),
    }
    _write(jsonio.dumps(doc), args.out)
    return 0 if doc["verification"]["passed"] else _verification_failure()


def cmd_enumerate(args) -> int:
    p, spec = _context(args)
    part = effective_modes(p, spec)
    pairs = _parse_pairs(args.pairs)
    unimodal = enumerate_unimodal(p, spec)
    families = enumerate_ee_families(p, spec, args.tol_cond)
    general = enumerate_general_bimodal(p, spec, pairs)
    samples: list[ModalSolution] = []
    family_docs = []
    for fi, fam in enumerate(families):
        fdoc = fam.to_json_dict()
        if args.samples > 0:
            drawn = sample_family(fam, args.samples, seed=args.seed + fi)
            samples.extend(drawn)
            fdoc["samples"] = [s.to_json_dict(p, spec) for s in drawn]
        family_docs.append(fdoc)
    isolated = sorted(unimodal + general, key=solution_sort_key)
    verification = _verify(isolated, samples, p, spec, args.tol_res)
    notes = []
    if not part.E:
        notes.append("E empty: only the trivial solution exists")
    doc = {
        "params": p.describe(),
        "spectrum": spec.describe(),
        "counts": {
            "unimodal": len(unimodal),
            "ee_families": len(families),
            "general_bimodal": len(general),
        },
        "unimodal": [s.to_json_dict(p, spec) for s in unimodal],
        "ee_families": family_docs,
        "general_bimodal": [s.to_json_dict(p, spec) for s in general],
        "verification": verification,
        "notes": notes,
    }
    _write(jsonio.dumps(doc), args.out)
    return 0 if verification["passed"] else _verification_failure()


def cmd_single(args) -> int:
    p, spec = _context(args)
    result = (
        enumerate_plain(p, spec)
        if args.model == "plain"
        else enumerate_foundation(p, spec, args.tol_cond)
    )
    doc = {
        "params": p.describe(),
        "spectrum": spec.describe(),
        "result": result.describe(),
    }
    _write(jsonio.dumps(doc), args.out)
    return 0


def cmd_oracle(args) -> int:
    p, spec = _context(args)
    result = galerkin_solve(p, spec, args.modes, args.starts, seed=args.seed, backend=args.backend)
    # reconcile against the closed forms the truncation can represent
    closed = sorted(
        (
            s
            for s in enumerate_unimodal(p, spec) + enumerate_general_bimodal(p, spec)
            if max(s.active) <= args.modes
        ),
        key=solution_sort_key,
    )
    families = [
        f
        for f in enumerate_ee_families(p, spec, args.tol_cond)
        if max(f.modes) <= args.modes
    ]
    report = match_against(closed, families, result.found)
    result.attach_match(report)
    doc = {
        "params": p.describe(),
        "spectrum": spec.describe(),
        "oracle": result.describe(p, spec),
        "matching": report.describe(),
        "closed_form_count": len(closed),
    }
    _write(jsonio.dumps(doc), args.out)
    if report.unmatched:
        return _verification_failure()
    return 0


def _branch_rows_for_beta(p: Params, spec: Spectrum, tracked, pairs) -> list[list]:
    rows = []
    counts = (
        len(enumerate_unimodal(p, spec)),
        len(enumerate_ee_families(p, spec)),
        len(enumerate_general_bimodal(p, spec)),
    )
    for n in tracked:
        curves = amplitude_curves(p, spec, n)
        partner = {1: 1, 2: 2, 3: 4, 4: 3}  # gamma pairs with the partner family
        for i in (1, 2, 3, 4):
            a = curves[i]
            if a is None:
                continue
            b = curves[partner[i]]
            gamma_mag = a if i == 1 else (-b if b is not None else None)
            for sign, sig in ((+1, "+"), (-1, "-")):
                rows.append(
                    [
                        p.beta,
                        f"n{n}:alpha{i}{sig}",
                        str(n),
                        sign * a,
                        sign * gamma_mag if gamma_mag is not None else None,
                        None,
                        None,
                        *counts,
                    ]
                )
    for pair in pairs or []:
        for sol in enumerate_general_bimodal(p, spec, [pair]):
            n1, n2 = pair
            a1, g1 = sol.modes[n1]
            a2, g2 = sol.modes[n2]
            kind = "XW" if sol.tag.endswith("(XW)") else "YZ"
            sig = ("+" if a1 > 0 else "-") + ("+" if a2 > 0 else "-")
            rows.append(
                [p.beta, f"b{n1}-{n2}:{kind}{sig}", f"{n1};{n2}", a1, g1, a2, g2, *counts]
            )
    return rows


def cmd_sweep(args) -> int:
    p, spec = _context(args)
    grid = _parse_grid(args.grid)
    pairs = _parse_pairs(args.pairs)
    if args.track:
        try:
            tracked = sorted({int(x) for x in args.track.split(",")})
        except ValueError as exc:
            raise ValidationError(f"bad --track {args.track!r}") from exc
    elif grid:
        top = Params(beta=-max(grid), varrho=p.varrho, k=p.k)
        tracked = list(effective_modes(top, spec).E) or [1]
    else:
        tracked = []
    minus_betas = set(grid)
    if grid:
        lo, hi = min(grid), max(grid)
        for n in tracked:
            lam = spec.eigenvalue(n)
            for boundary in (lam, mu_value(lam, p.k), nu_value(lam, p.k)):
                if lo <= boundary <= hi:
                    minus_betas.add(boundary)
    header = [
        "beta", "branch_id", "modes", "alpha_1", "gamma_1", "alpha_2", "gamma_2",
        "count_unimodal", "count_ee_families", "count_general_bimodal",
    ]
    rows = []
    for mb in minus_betas:
        pb = Params(beta=-mb, varrho=p.varrho, k=p.k)
        rows.extend(_branch_rows_for_beta(pb, spec, tracked, pairs))
    rows.sort(key=lambda r: (r[0], r[1]))
    text = jsonio.csv_text(header, rows)
    _write(text, args.out)
    if args.gnuplot is not None and args.out is not None:
        args.gnuplot.write_text(_gnuplot_script(args.out, header), encoding="utf-8")
    return 0


def _gnuplot_script(csv_path: Path, header: list[str]) -> str:
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead outside",
        "set xlabel 'compression'",
        "set ylabel 'amplitude'",
        "set grid",
    ]
    plots = ", ".join(
        f"'{csv_path.name}' using 1:{i + 1} with points pt 7 ps 0.3"
        for i in range(1, len(header))
        if header[i].startswith(("alpha", "gamma"))
    )
    lines.append(f"plot {plots}")
    return "\n".join(lines) + "\n"


def cmd_convert(args) -> int:
    phys = PhysicalParams(
        ell=args.ell,
        h=args.h,
        E_mod=args.E_mod,
        nu_poisson=args.nu_poisson,
        D_axial=args.D_axial,
        kappa_core=args.kappa_core,
        omega_area=args.omega_area,
        rho_density=args.rho_density,
    )
    params, diag = dimensionless_params(phys)
    doc = {"params": params.describe(), "diagnostics": diag.describe()}
    _write(jsonio.dumps(doc), args.out)
    return 0


def _verification_failure() -> int:
    print("beamforge: verification failed (internal inconsistency)", file=sys.stderr)
    return 3


_COMMANDS = {
    "sets": cmd_sets,
    "unimodal": cmd_unimodal,
    "enumerate": cmd_enumerate,
    "single": cmd_single,
    "oracle": cmd_oracle,
    "sweep": cmd_sweep,
    "convert": cmd_convert,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"beamforge: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"beamforge: {exc}", file=sys.stderr)
        return 3
    except (IndexError, FileNotFoundError) as exc:
        print(f"beamforge: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
