"""Command-line entry point.

Exit codes: 0 affirmative (valid / found / sat / clique-free), 1 negative,
2 usage or input error, 3 timeout or partial result.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import algebra as alg
from .groups import GroupAxiomError, parse_group
from .search import FOUND, NONE, TIMEOUT, SearchConfig, log_record, search_group, spectrum, write_certificate
from .verify import load_coloring, ramsey_check, save_coloring, verify

OK, NEGATIVE, USAGE, PARTIAL = 0, 1, 2, 3


class InputError(Exception):
    pass


def _structure(ref: str):
    try:
        return alg.resolve_structure(ref)
    except (KeyError, ValueError, OSError) as exc:
        raise InputError(str(exc).strip('"')) from exc


def _coloring(path: str):
    try:
        return load_coloring(path)
    except (ValueError, OSError, GroupAxiomError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _config(args) -> SearchConfig:
    solver = getattr(args, "solver_cmd", None) or os.environ.get("CYCREP_SOLVER")
    if args.engine == "sat" and not solver:
        raise InputError("--engine sat needs --solver-cmd (or CYCREP_SOLVER); "
                         "use 'builtin' for the bundled CaDiCaL binding")
    if solver == "builtin":
        solver = None
    return SearchConfig(
        engine=args.engine,
        parallel_width=getattr(args, "jobs", 1),
        prune_multipliers=getattr(args, "prune_multipliers", False),
        time_budget=args.budget,
        solver_command=solver,
    )


def cmd_verify(args) -> int:
    s = _structure(args.algebra)
    c = _coloring(args.coloring)
    try:
        report = verify(s, c)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    print(f"{s.name} over {c.group.spec}: {report.status}")
    for v in report.violations:
        print(f"  {v}")
    return OK if report.valid else NEGATIVE


def _report_outcome(args, s, outcome) -> None:
    cert = None
    if outcome.result == FOUND:
        cert = write_certificate(outcome, args.certificates, s.name)
        print(f"{outcome.group}: found ({outcome.nodes} nodes, {outcome.wall_time:.2f}s) -> {cert}")
    else:
        print(f"{outcome.group}: {outcome.result} ({outcome.nodes} nodes, {outcome.wall_time:.2f}s)")
    if args.log:
        log_record(args.log, s.name, outcome, cert)


def cmd_search(args) -> int:
    s = _structure(args.algebra)
    cfg = _config(args)
    if args.group:
        if args.n_min is not None or args.n_max is not None:
            raise InputError("give either --group or --n-min/--n-max, not both")
        try:
            g = parse_group(args.group)
            outcome = search_group(s, g, cfg)
        except (ValueError, OSError) as exc:
            raise InputError(str(exc)) from exc
        _report_outcome(args, s, outcome)
        return {FOUND: OK, NONE: NEGATIVE, TIMEOUT: PARTIAL}[outcome.result]
    if args.n_min is None or args.n_max is None:
        raise InputError("search needs --group or both --n-min and --n-max")
    if args.prune_multipliers:
        raise InputError("--prune-multipliers is only allowed with a single --group")
    try:
        res = spectrum(s, args.n_min, args.n_max, cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for n in sorted(res.outcomes):
        _report_outcome(args, s, res.outcomes[n])
    if res.partial:
        print(f"partial: timed out at n = {res.timed_out}")
        return PARTIAL
    return OK if res.found else NEGATIVE


def cmd_spectrum(args) -> int:
    s = _structure(args.algebra)
    cfg = _config(args)
    try:
        res = spectrum(s, args.n_min, args.n_max, cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for n in res.found:
        cert = write_certificate(res.outcomes[n], args.certificates, s.name)
        if args.log:
            log_record(args.log, s.name, res.outcomes[n], cert)
    if args.log:
        for n in sorted(res.outcomes):
            if res.outcomes[n].result != FOUND:
                log_record(args.log, s.name, res.outcomes[n])
    found = ", ".join(map(str, res.found))
    print(f"{s.name} cyclic spectrum in [{args.n_min}, {args.n_max}]: {{{found}}}")
    if res.found:
        print(f"certificates: {args.certificates}")
    if res.partial:
        print(f"partial: timed out at n = {res.timed_out}")
        return PARTIAL
    return OK if res.found else NEGATIVE


def cmd_enumerate(args) -> int:
    try:
        structures = alg.enumerate_structures(args.diversity_atoms, args.flexible_only)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for s in structures:
        flex = "".join(sorted(alg.flexible_atoms(s))) or "-"
        print(f"{s}  (flexible: {flex})")
        if args.out_dir:
            Path(args.out_dir).mkdir(parents=True, exist_ok=True)
            alg.save_structure(s, Path(args.out_dir) / f"{s.name}.json")
    print(f"{len(structures)} structures")
    return OK


def cmd_catalog(args) -> int:
    for name, entry in alg.CATALOG.items():
        print(f"{entry.structure}  -- {entry.provenance}")
        if args.out_dir:
            Path(args.out_dir).mkdir(parents=True, exist_ok=True)
            alg.save_structure(entry.structure, Path(args.out_dir) / f"{name}.json")
    return OK


def cmd_encode(args) -> int:
    from .sat import emit_dimacs, encode

    s = _structure(args.algebra)
    try:
        inst = encode(s, args.n, symmetry_breaking=args.symmetry_breaking)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    cnf = args.cnf or f"{s.name}_z{args.n}.cnf"
    vmap = args.map or f"{s.name}_z{args.n}.map"
    emit_dimacs(inst, cnf, vmap)
    print(f"wrote {cnf} ({inst.num_vars} variables, {len(inst.clauses)} clauses) and {vmap}")
    return OK


def cmd_decode(args) -> int:
    from .sat import MalformedModel, decode, parse_solver_output

    s = _structure(args.algebra)
    try:
        verdict, model = parse_solver_output(Path(args.model).read_text())
    except OSError as exc:
        raise InputError(str(exc)) from exc
    if verdict == "unsat":
        print("solver reported UNSATISFIABLE; nothing to decode")
        return NEGATIVE
    try:
        c = decode(args.map, model, s, args.n)
    except (MalformedModel, ValueError, OSError) as exc:
        raise InputError(str(exc)) from exc
    report = verify(s, c)
    if args.out:
        save_coloring(c, args.out)
    for a, xs in c.classes.items():
        print(f"{a}: {sorted(xs)}")
    print(f"verify: {report.status}")
    for v in report.violations:
        print(f"  {v}")
    return OK if report.valid else NEGATIVE


def _parse_bounds(text: str) -> dict[str, int]:
    out = {}
    for part in text.split(","):
        atom, sep, t = part.partition("=")
        if not sep or not t.strip().isdigit():
            raise InputError(f"bad bound {part!r}; expected atom=t")
        out[atom.strip()] = int(t)
    return out


def cmd_ramsey(args) -> int:
    c = _coloring(args.coloring)
    bounds = _parse_bounds(args.bounds)
    try:
        report = ramsey_check(c, bounds)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for atom, clique in report.cliques.items():
        if clique is None:
            print(f"{atom}: no monochromatic K{bounds[atom]}")
        else:
            print(f"{atom}: monochromatic K{bounds[atom]} on vertices {list(clique)}")
    if report.clique_free:
        spec = ",".join(str(bounds[a]) for a in bounds)
        print(f"clique-free: R({spec}) > {c.group.order}")
    return OK if report.clique_free else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cycrep", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check a coloring against an algebra")
    v.add_argument("--algebra", required=True, help="catalog name or algebra file")
    v.add_argument("--coloring", required=True)
    v.set_defaults(func=cmd_verify)

    def search_opts(sp):
        sp.add_argument("--algebra", required=True)
        sp.add_argument("--engine", choices=["backtrack", "sat"], default="backtrack")
        sp.add_argument("--solver-cmd", help="external DIMACS solver command, or 'builtin'")
        sp.add_argument("--budget", type=float, default=0.0, help="seconds per group (0 = unlimited)")
        sp.add_argument("--jobs", type=int, default=1, help="moduli searched in parallel")
        sp.add_argument("--certificates", default="certificates", help="directory for found colorings")
        sp.add_argument("--log", help="append JSON-lines records to this file")

    s = sub.add_parser("search", help="search one group or a range of cyclic groups")
    search_opts(s)
    s.add_argument("--group", help="zN, sK or cayley:<path>")
    s.add_argument("--n-min", type=int)
    s.add_argument("--n-max", type=int)
    s.add_argument("--prune-multipliers", action="store_true",
                   help="multiplier symmetry breaking (existence search only)")
    s.set_defaults(func=cmd_search)

    sp = sub.add_parser("spectrum", help="cyclic spectrum over a range of moduli")
    search_opts(sp)
    sp.add_argument("--n-min", type=int, required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.set_defaults(func=cmd_spectrum)

    e = sub.add_parser("enumerate", help="list structures up to relabeling")
    e.add_argument("--diversity-atoms", type=int, required=True)
    e.add_argument("--flexible-only", action="store_true")
    e.add_argument("--out-dir", help="also write one algebra file per structure")
    e.set_defaults(func=cmd_enumerate)

    cat = sub.add_parser("catalog", help="list built-in algebras")
    cat.add_argument("--out-dir", help="also write one algebra file per entry")
    cat.set_defaults(func=cmd_catalog)

    enc = sub.add_parser("encode", help="write DIMACS CNF and variable map")
    enc.add_argument("--algebra", required=True)
    enc.add_argument("--n", type=int, required=True)
    enc.add_argument("--cnf")
    enc.add_argument("--map")
    enc.add_argument("--symmetry-breaking", action="store_true")
    enc.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="turn solver output back into a coloring")
    d.add_argument("--algebra", required=True)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--map", required=True)
    d.add_argument("--model", required=True, help="solver output with s/v lines")
    d.add_argument("--out", help="write the coloring here")
    d.set_defaults(func=cmd_decode)

    r = sub.add_parser("ramsey", help="clique check of a circulant coloring")
    r.add_argument("--coloring", required=True)
    r.add_argument("--bounds", required=True, help="e.g. a=4,b=3,c=3")
    r.set_defaults(func=cmd_ramsey)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
