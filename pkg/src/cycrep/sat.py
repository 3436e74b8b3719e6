"""CNF encoding of "structure s has a representation over Z/n".

Color variables ``v(orbit, atom)`` come first (ids ``1..orbits*atoms``),
followed by auxiliary pair variables ``d(y, i, z, j)`` in order of first use.
"""
from __future__ import annotations

import math
import os
import shlex
import subprocess
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .algebra import AtomStructure, allowed_cycles, distinct_targets, orientations, validate_ra
from .groups import FiniteGroup, cyclic_group, inverse_orbits
from .verify import Coloring, verify

SOLVER_ENV = "CYCREP_SOLVER"

Clause = tuple[int, ...]


class MalformedModel(ValueError):
    pass


class SolverError(RuntimeError):
    pass


@dataclass
class VarMap:
    atoms: tuple[str, ...]
    orbit_reps: list[int]
    orbit_members: list[tuple[int, ...]]
    aux: dict[tuple[int, str, int, str], int] = field(default_factory=dict)

    def color(self, orbit_index: int, atom: str) -> int:
        return orbit_index * len(self.atoms) + self.atoms.index(atom) + 1

    @property
    def num_color_vars(self) -> int:
        return len(self.orbit_reps) * len(self.atoms)


@dataclass
class CnfInstance:
    num_vars: int
    clauses: list[Clause]
    varmap: VarMap
    comments: list[str] = field(default_factory=list)


def _norm(lits: Iterable[int]) -> Clause:
    return tuple(sorted(set(lits), key=lambda l: (abs(l), l)))


class _ClauseSet:
    def __init__(self):
        self.clauses: list[Clause] = []
        self._seen: set[Clause] = set()

    def add(self, lits):
        c = _norm(lits)
        if c not in self._seen:
            self._seen.add(c)
            self.clauses.append(c)


def encode(s: AtomStructure, n: int, symmetry_breaking: bool = False) -> CnfInstance:
    """Build the CNF instance.  ``symmetry_breaking`` forces the color of 1 to be
    minimal among units (sound for existence, off by default)."""
    if n < 2:
        raise ValueError("encode needs n >= 2")
    if not validate_ra(s):
        raise ValueError(f"{s.name} is not an integral relation algebra atom structure")
    g = cyclic_group(n)
    atoms = s.diversity_atoms
    orbits = inverse_orbits(g)
    if len(orbits) < len(atoms):
        raise ValueError(f"Z/{n} has {len(orbits)} inverse orbits, fewer than {len(atoms)} atoms")
    vm = VarMap(atoms, [o.representative for o in orbits], [o.members for o in orbits])
    orbit_of = {}
    for idx, o in enumerate(orbits):
        for m in o.members:
            orbit_of[m] = idx

    def v(x, a):
        return vm.color(orbit_of[x], a)

    next_id = vm.num_color_vars + 1
    cs = _ClauseSet()

    # exactly one atom per orbit
    for o in range(len(orbits)):
        cs.add(vm.color(o, a) for a in atoms)
        for p in range(len(atoms)):
            for q in range(p + 1, len(atoms)):
                cs.add((-vm.color(o, atoms[p]), -vm.color(o, atoms[q])))

    order = {a: i for i, a in enumerate(atoms)}
    key = lambda cy: [order[a] for a in cy]

    # forbidden cycles never realized
    for cyc in sorted(s.forbidden, key=key):
        perms = orientations(cyc)
        for y in range(1, n):
            for z in range(1, n):
                x = (y + z) % n
                if x == 0:
                    continue
                for i, j, k in perms:
                    cs.add((-v(y, i), -v(z, j), -v(x, k)))

    # allowed cycles witnessed at every element of the target class
    defs = []
    for cyc in sorted(allowed_cycles(s), key=key):
        for i, j, k in distinct_targets(cyc):
            for x in range(1, n):
                lits = [-v(x, k)]
                for y in range(1, n):
                    z = (x - y) % n
                    if z == 0:
                        continue
                    dk = (y, i, z, j)
                    if dk not in vm.aux:
                        vm.aux[dk] = next_id
                        next_id += 1
                        defs.append(dk)
                    lits.append(vm.aux[dk])
                cs.add(lits)
    for dk in defs:
        y, i, z, j = dk
        cs.add((-vm.aux[dk], v(y, i)))
        cs.add((-vm.aux[dk], v(z, j)))

    # no empty class
    for a in atoms:
        cs.add(vm.color(o, a) for o in range(len(orbits)))

    if symmetry_breaking and n > 2:
        units = [u for u in range(2, n) if math.gcd(u, n) == 1 and orbit_of[u] != orbit_of[1]]
        for u in units:
            for p, big in enumerate(atoms):
                for small in atoms[:p]:
                    cs.add((-v(1, big), -v(u, small)))

    comments = [f"{s.name or 'structure'} over Z/{n}", f"atoms {' '.join(atoms)}"]
    if symmetry_breaking:
        comments.append("multiplier symmetry breaking: existence only")
    return CnfInstance(next_id - 1, cs.clauses, vm, comments)


# --- files -----------------------------------------------------------------

def dimacs_text(inst: CnfInstance) -> str:
    lines = [f"c {c}" for c in inst.comments]
    lines.append(f"p cnf {inst.num_vars} {len(inst.clauses)}")
    lines.extend(" ".join(map(str, c)) + " 0" for c in inst.clauses)
    return "\n".join(lines) + "\n"


def varmap_text(vm: VarMap) -> str:
    lines = []
    for o, rep in enumerate(vm.orbit_reps):
        for a in vm.atoms:
            lines.append(f"v {vm.color(o, a)} {rep} {a}")
    for (y, i, z, j), vid in sorted(vm.aux.items(), key=lambda kv: kv[1]):
        lines.append(f"d {vid} {y} {i} {z} {j}")
    return "\n".join(lines) + "\n"


def emit_dimacs(inst: CnfInstance, cnf_path, map_path) -> None:
    for path, text in ((cnf_path, dimacs_text(inst)), (map_path, varmap_text(inst.varmap))):
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc


def parse_dimacs(text: str) -> tuple[int, list[Clause]]:
    num_vars = None
    clauses: list[Clause] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if num_vars is None:
        raise ValueError("missing 'p cnf' line")
    if current:
        clauses.append(tuple(current))
    return num_vars, clauses


def read_varmap(map_path) -> tuple[dict[int, tuple[int, str]], dict[int, tuple]]:
    colors, aux = {}, {}
    for ln in Path(map_path).read_text().splitlines():
        parts = ln.split()
        if not parts:
            continue
        if parts[0] == "v" and len(parts) == 4:
            colors[int(parts[1])] = (int(parts[2]), parts[3])
        elif parts[0] == "d" and len(parts) == 6:
            aux[int(parts[1])] = (int(parts[2]), parts[3], int(parts[4]), parts[5])
        else:
            raise ValueError(f"{map_path}: bad map line {ln!r}")
    return colors, aux


def _decode_colors(colors: dict[int, tuple[int, str]], model: Iterable[int], s: AtomStructure, n: int) -> Coloring:
    g = cyclic_group(n)
    true = {m for m in model if m > 0}
    chosen: dict[int, list[str]] = {}
    for vid, (rep, atom) in colors.items():
        chosen.setdefault(rep, [])
        if vid in true:
            chosen[rep].append(atom)
    classes = {a: set() for a in s.diversity_atoms}
    for rep in sorted(chosen):
        picked = chosen[rep]
        if len(picked) != 1:
            what = "no color" if not picked else "colors " + ",".join(picked)
            raise MalformedModel(f"orbit of {rep} has {what}")
        if picked[0] not in classes:
            raise MalformedModel(f"orbit of {rep} colored with unknown atom {picked[0]!r}")
        classes[picked[0]].update({rep, g.inv(rep)})
    return Coloring(g, classes)


def decode(map_path, model: Iterable[int], s: AtomStructure, n: int) -> Coloring:
    colors, _ = read_varmap(map_path)
    return _decode_colors(colors, model, s, n)


def decode_instance(inst: CnfInstance, model: Iterable[int], s: AtomStructure, n: int) -> Coloring:
    vm = inst.varmap
    colors = {vm.color(o, a): (rep, a) for o, rep in enumerate(vm.orbit_reps) for a in vm.atoms}
    return _decode_colors(colors, model, s, n)


# --- solving ---------------------------------------------------------------

@dataclass
class SolveResult:
    status: str                      # "sat", "unsat", "timeout" or "error"
    model: list[int] | None = None
    coloring: Coloring | None = None
    message: str = ""
    wall_time: float = 0.0


def parse_solver_output(text: str) -> tuple[str | None, list[int]]:
    verdict = None
    model: list[int] = []
    for line in text.splitlines():
        if line.startswith("s "):
            word = line[2:].strip().upper()
            if word == "SATISFIABLE":
                verdict = "sat"
            elif word == "UNSATISFIABLE":
                verdict = "unsat"
            else:
                verdict = word.lower()
        elif line.startswith("v "):
            model.extend(int(t) for t in line[2:].split() if t != "0")
    return verdict, model


def _check_sat(inst: CnfInstance, model: list[int], s: AtomStructure, n: int, t0: float) -> SolveResult:
    try:
        coloring = decode_instance(inst, model, s, n)
    except MalformedModel as exc:
        return SolveResult("error", model, None, f"solver model does not decode: {exc}", time.monotonic() - t0)
    report = verify(s, coloring)
    if not report.valid:
        return SolveResult(
            "error", model, coloring,
            f"solver model fails verification: {report.violations[0]}", time.monotonic() - t0,
        )
    return SolveResult("sat", model, coloring, "", time.monotonic() - t0)


def solve_external(inst: CnfInstance, solver_command: str, s: AtomStructure, n: int,
                   timeout: float | None = None, workdir=None) -> SolveResult:
    """Run ``solver_command <cnf>`` and read standard ``s``/``v`` output lines."""
    t0 = time.monotonic()
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        cnf = Path(tmp) / "instance.cnf"
        emit_dimacs(inst, cnf, Path(tmp) / "instance.map")
        argv = shlex.split(solver_command) + [str(cnf)]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout or None)
        except subprocess.TimeoutExpired:
            return SolveResult("timeout", message=f"solver exceeded {timeout}s", wall_time=time.monotonic() - t0)
        except OSError as exc:
            return SolveResult("error", message=f"cannot run {argv[0]}: {exc}", wall_time=time.monotonic() - t0)
    verdict, model = parse_solver_output(proc.stdout)
    if verdict == "unsat":
        return SolveResult("unsat", wall_time=time.monotonic() - t0)
    if verdict == "sat":
        return _check_sat(inst, model, s, n, t0)
    excerpt = (proc.stdout + proc.stderr).strip()[:300]
    return SolveResult(
        "error", message=f"no verdict from solver (exit {proc.returncode}): {excerpt!r}",
        wall_time=time.monotonic() - t0,
    )


def solve_inprocess(inst: CnfInstance, s: AtomStructure, n: int, timeout: float | None = None) -> SolveResult:
    """Solve with the bundled CaDiCaL binding from python-sat."""
    from pysat.solvers import Solver

    t0 = time.monotonic()
    with Solver(name="cadical195", bootstrap_with=inst.clauses) as solver:
        if timeout:
            timer = threading.Timer(timeout, solver.interrupt)
            timer.start()
            try:
                res = solver.solve_limited(expect_interrupt=True)
            finally:
                timer.cancel()
        else:
            res = solver.solve()
        model = solver.get_model() if res else None
    if res is None:
        return SolveResult("timeout", message=f"solver exceeded {timeout}s", wall_time=time.monotonic() - t0)
    if not res:
        return SolveResult("unsat", wall_time=time.monotonic() - t0)
    return _check_sat(inst, model, s, n, t0)


def solve(inst: CnfInstance, s: AtomStructure, n: int, solver_command: str | None = None,
          timeout: float | None = None) -> SolveResult:
    solver_command = solver_command or os.environ.get(SOLVER_ENV) or None
    if solver_command:
        return solve_external(inst, solver_command, s, n, timeout)
    return solve_inprocess(inst, s, n, timeout)


def search_sat(s: AtomStructure, g: FiniteGroup, cfg):
    from .search import FOUND, NONE, TIMEOUT, SearchOutcome

    if not g.cyclic:
        raise ValueError("the SAT path supports cyclic groups only; use the backtracking engine")
    inst = encode(s, g.order, symmetry_breaking=cfg.prune_multipliers)
    res = solve(inst, s, g.order, cfg.solver_command, cfg.time_budget or None)
    if res.status == "error":
        raise SolverError(res.message)
    result = {"sat": FOUND, "unsat": NONE, "timeout": TIMEOUT}[res.status]
    return SearchOutcome(g.spec, result, res.coloring, 0, res.wall_time)
