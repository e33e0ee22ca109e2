"""Command-line interface: diameter, certify, power-sums, family.

stdout carries machine-readable output only (JSON documents, CSV tables);
progress and diagnostics go to stderr.  Exit codes partition the outcomes:

    0  success
    2  usage error (argparse)
    3  instance or parameter format error
    4  closure cap exceeded
    5  reducible input
    6  certification not applicable (p does not divide |G|)
    7  certified bound violated (implementation defect, never expected)
    8  search budget exceeded
"""

from __future__ import annotations

import argparse
import io
import sys
from pathlib import Path

from .diameter import instance_diameter
from .errors import (
    BoundViolationError,
    CapExceededError,
    InstanceFormatError,
    ReducibleInstanceError,
    SearchBudgetExceededError,
    WitnessConstructionError,
)
from .families import FAMILY_NAMES, build_family
from .powersums import PowerSumSystem, solvability_frontier, solve, verify_solution
from .reports import (
    certification_to_dict,
    diameter_report_to_dict,
    dumps_canonical,
    load_instance,
    save_instance,
    write_frontier_csv,
)
from .witness import certify_instance

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_CAP = 4
EXIT_REDUCIBLE = 5
EXIT_NOT_APPLICABLE = 6
EXIT_BOUND_VIOLATION = 7
EXIT_BUDGET = 8


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
        _log(f"wrote {out}")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbdiam",
        description="Exact orbital-graph diameters and decomposition certificates "
        "for matrix groups over prime fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    diam = sub.add_parser("diameter", help="exact per-orbit diameter report")
    diam.add_argument("instance", help="instance JSON file")
    diam.add_argument("-o", "--output", help="report path (default: stdout)")
    diam.add_argument("--undirected", action="store_true",
                      help="also compute undirected diameters")
    diam.add_argument("--cap", type=int, help="closure element cap")
    diam.add_argument("--threads", type=int, default=1)
    diam.add_argument("--figures", metavar="DIR", help="render figures into DIR")

    cert = sub.add_parser("certify", help="decomposition certificates per orbit")
    cert.add_argument("instance", help="instance JSON file")
    cert.add_argument("-o", "--output", help="report path (default: stdout)")
    cert.add_argument("--targets", choices=["auto", "all", "sample"], default="auto",
                      help="target policy: all of V, a seeded sample, or auto by size")
    cert.add_argument("--sample-size", type=int, default=1000)
    cert.add_argument("--seed", type=int, default=0)
    cert.add_argument("--cap", type=int, help="closure element cap")
    cert.add_argument("--threads", type=int, default=1)
    cert.add_argument("--figures", metavar="DIR", help="render figures into DIR")

    ps = sub.add_parser("power-sums", help="solve power-sum systems or scan solvability")
    ps.add_argument("-p", type=int, required=True, help="prime modulus")
    ps.add_argument("-k", type=int, required=True, help="number of equations")
    ps.add_argument("-m", type=int, help="number of unknowns (solve mode)")
    ps.add_argument("--rhs", help="comma-separated right-hand side b_1,...,b_k")
    ps.add_argument("--frontier", type=int, metavar="M_MAX",
                    help="scan all m <= M_MAX instead of solving one system")
    ps.add_argument("-o", "--output", help="output path (default: stdout)")
    ps.add_argument("--figures", metavar="DIR",
                    help="render a frontier figure into DIR (frontier mode)")

    fam = sub.add_parser("family", help="write a named family instance file")
    fam.add_argument("name", choices=FAMILY_NAMES)
    fam.add_argument("--p", type=int, required=True)
    fam.add_argument("--d", type=int, help="dimension (sl and singer families)")
    fam.add_argument("-o", "--output", help="instance path (default: stdout)")

    return parser


def _figure_dir(args) -> Path | None:
    if not getattr(args, "figures", None):
        return None
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _cmd_diameter(args) -> int:
    inst = load_instance(args.instance)
    _log(f"instance '{inst.label}': p={inst.p}, d={inst.d}, {inst.npoints} points")
    report = instance_diameter(
        inst, cap=args.cap, undirected=args.undirected, threads=args.threads
    )
    _log(f"{report.orbit_count} nonzero orbits, overall directed diameter "
         f"{report.overall_directed}")
    flags = {"undirected": args.undirected, "threads": args.threads}
    if args.cap is not None:
        flags["cap"] = args.cap
    _emit(dumps_canonical(diameter_report_to_dict(report, flags)), args.output)
    figdir = _figure_dir(args)
    if figdir:
        from .figures import render_growth_figure

        out = render_growth_figure(
            report, figdir / f"{inst.label or 'instance'}_sumset_growth.png"
        )
        _log(f"wrote {out}")
    return EXIT_OK


def _cmd_certify(args) -> int:
    inst = load_instance(args.instance)
    _log(f"instance '{inst.label}': p={inst.p}, d={inst.d}, {inst.npoints} points")
    result = certify_instance(
        inst,
        cap=args.cap,
        targets=args.targets,
        sample_size=args.sample_size,
        seed=args.seed,
        threads=args.threads,
    )
    flags = {
        "targets": args.targets,
        "sample_size": args.sample_size,
        "seed": args.seed,
        "threads": args.threads,
    }
    if args.cap is not None:
        flags["cap"] = args.cap
    _emit(dumps_canonical(certification_to_dict(result, flags)), args.output)
    if result.status == "not_applicable":
        _log(f"not applicable: {result.reason}")
        return EXIT_NOT_APPLICABLE
    _log(f"{result.branch} branch: max witness length {result.max_length} "
         f"<= {result.branch_bound} (branch) <= {result.bound} (certified)")
    figdir = _figure_dir(args)
    if figdir:
        from .figures import render_certification_figure

        out = render_certification_figure(
            result, figdir / f"{inst.label or 'instance'}_witness_lengths.png"
        )
        _log(f"wrote {out}")
    return EXIT_OK


def _parse_rhs(text: str, k: int, p: int) -> tuple[int, ...]:
    try:
        rhs = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise InstanceFormatError(f"cannot parse rhs '{text}'") from exc
    if len(rhs) != k:
        raise InstanceFormatError(f"rhs has {len(rhs)} entries, expected k = {k}")
    return tuple(b % p for b in rhs)


def _cmd_power_sums(args) -> int:
    from .fpmat import is_prime

    if not is_prime(args.p):
        raise InstanceFormatError(f"p = {args.p} is not prime")
    if args.frontier is not None:
        rows = solvability_frontier(args.p, args.k, args.frontier)
        buf = io.StringIO()
        write_frontier_csv(rows, buf)
        _emit(buf.getvalue(), args.output)
        figdir = _figure_dir(args)
        if figdir:
            from .figures import render_frontier_figure

            out = render_frontier_figure(
                rows, figdir / f"frontier_p{args.p}_k{args.k}.png"
            )
            _log(f"wrote {out}")
        return EXIT_OK
    if args.m is None or args.rhs is None:
        raise InstanceFormatError("solve mode needs -m and --rhs (or use --frontier)")
    rhs = _parse_rhs(args.rhs, args.k, args.p)
    system = PowerSumSystem(p=args.p, k=args.k, m=args.m, rhs=rhs)
    solution = solve(system)
    doc = {
        "schema": "orbdiam.power-sums/1",
        "p": args.p,
        "k": args.k,
        "m": args.m,
        "rhs": list(rhs),
    }
    if solution is None:
        doc["status"] = "no_solution"
        doc["solution"] = None
    else:
        doc["status"] = "solved"
        doc["solution"] = list(solution)
        doc["verified"] = verify_solution(system, solution)
    _emit(dumps_canonical(doc), args.output)
    return EXIT_OK


def _cmd_family(args) -> int:
    try:
        inst = build_family(args.name, p=args.p, d=args.d)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc
    if args.output:
        save_instance(inst, args.output)
        _log(f"wrote {args.output}")
    else:
        from .reports import instance_to_dict

        sys.stdout.write(dumps_canonical(instance_to_dict(inst)))
    return EXIT_OK


_HANDLERS = {
    "diameter": _cmd_diameter,
    "certify": _cmd_certify,
    "power-sums": _cmd_power_sums,
    "family": _cmd_family,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except InstanceFormatError as exc:
        _log(f"format error: {exc}")
        return EXIT_FORMAT
    except CapExceededError as exc:
        _log(f"cap exceeded: {exc}")
        return EXIT_CAP
    except ReducibleInstanceError as exc:
        _log(f"reducible input: {exc}")
        return EXIT_REDUCIBLE
    except (BoundViolationError, WitnessConstructionError) as exc:
        _log(f"certificate violation: {exc}")
        return EXIT_BOUND_VIOLATION
    except SearchBudgetExceededError as exc:
        _log(f"search budget exceeded: {exc}")
        return EXIT_BUDGET


if __name__ == "__main__":
    raise SystemExit(main())
