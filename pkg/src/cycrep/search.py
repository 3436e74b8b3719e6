"""Complete backtracking search for representations over a finite group.

Color classes are Python ints used as bitsets over group elements.  Inverse
orbits are assigned in increasing order of representative; atoms are tried in
structure order.  Two kinds of pruning keep the search complete:

* forward checking of forbidden cycles: assigning ``e`` to atom ``a`` bans
  atom ``k`` from every element of ``e * X_j`` for each orientation
  ``(a, j, k)`` of a forbidden cycle;
* a witness lookahead: an assigned element that can no longer be written as
  ``y*z`` with ``y``, ``z`` still able to take the flanking atoms kills the
  branch.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .algebra import AtomStructure, allowed_cycles, distinct_targets, orientations, validate_ra
from .groups import FiniteGroup, cyclic_group, inverse_orbits
from .verify import Coloring, save_coloring, verify

FOUND, NONE, TIMEOUT = "found", "none", "timeout"


@dataclass
class SearchConfig:
    engine: str = "backtrack"         # "backtrack" or "sat"
    parallel_width: int = 1
    prune_multipliers: bool = False   # existence search only
    time_budget: float = 0.0          # seconds per group, 0 = unlimited
    solver_command: str | None = None  # external solver for engine="sat"; None = in-process

    def __post_init__(self):
        if self.engine not in ("backtrack", "sat"):
            raise ValueError(f"unknown engine {self.engine!r}")


@dataclass
class SearchOutcome:
    group: str
    result: str
    coloring: Coloring | None = None
    nodes: int = 0
    wall_time: float = 0.0

    @property
    def found(self) -> bool:
        return self.result == FOUND


class _Timeout(Exception):
    pass


class _Bits:
    """Left translation of element bitsets."""

    def __init__(self, g: FiniteGroup):
        self.n = g.order
        self.full = ((1 << g.order) - 1) & ~1
        self.cyclic = g.cyclic
        self.abelian = g.cyclic or g.is_abelian()
        self.rows = [list(map(int, row)) for row in g.table]
        self.inv = [int(v) for v in g.inverse]

    def translate(self, mask: int, e: int) -> int:
        """Bitset of ``{e*z : z in mask}``."""
        if self.cyclic:
            n = self.n
            return ((mask << e) | (mask >> (n - e))) & ((1 << n) - 1)
        row = self.rows[e]
        out = 0
        while mask:
            low = mask & -mask
            out |= 1 << row[low.bit_length() - 1]
            mask ^= low
        return out

    def meets(self, a: int, b: int, x: int) -> bool:
        """Whether ``a`` intersects ``x * b``."""
        if self.cyclic:
            n = self.n
            return bool(a & (((b << x) | (b >> (n - x))) & ((1 << n) - 1)))
        row = self.rows[x]
        while b:
            low = b & -b
            if a >> row[low.bit_length() - 1] & 1:
                return True
            b ^= low
        return False

    def close(self, mask: int) -> int:
        """Smallest inverse-closed superset."""
        if self.abelian and self.cyclic:
            return mask
        out = mask
        m = mask
        inv = self.inv
        while m:
            low = m & -m
            out |= 1 << inv[low.bit_length() - 1]
            m ^= low
        return out


def _units(n: int) -> list[int]:
    return [u for u in range(1, n) if math.gcd(u, n) == 1]


def search_group(s: AtomStructure, g: FiniteGroup, cfg: SearchConfig | None = None) -> SearchOutcome:
    cfg = cfg or SearchConfig()
    atoms = s.diversity_atoms
    orbits = inverse_orbits(g)
    if not validate_ra(s):
        raise ValueError(f"{s.name} is not an integral relation algebra atom structure")
    if len(orbits) < len(atoms):
        raise ValueError(f"{g.spec} has {len(orbits)} inverse orbits, fewer than {len(atoms)} atoms")
    if cfg.engine == "sat":
        from .sat import search_sat
        return search_sat(s, g, cfg)
    return _Backtracker(s, g, cfg).run()


class _Backtracker:
    def __init__(self, s: AtomStructure, g: FiniteGroup, cfg: SearchConfig):
        self.s, self.g, self.cfg = s, g, cfg
        self.bits = _Bits(g)
        atoms = s.diversity_atoms
        self.na = len(atoms)
        idx = {a: i for i, a in enumerate(atoms)}
        self.orbits = inverse_orbits(g)
        self.orbit_mask = [sum(1 << m for m in o.members) for o in self.orbits]
        # per atom: (j, k) pairs from orientations of forbidden cycles starting with it
        self.forb = [[] for _ in atoms]
        for cyc in s.forbidden:
            for p, q, r in orientations(cyc):
                pair = (idx[q], idx[r])
                if pair not in self.forb[idx[p]]:
                    self.forb[idx[p]].append(pair)
        # per target atom k: list of flank pairs (i, j)
        self.targets = [[] for _ in atoms]
        for cyc in allowed_cycles(s):
            for i, j, k in distinct_targets(cyc):
                self.targets[idx[k]].append((idx[i], idx[j]))
        self.check_elems = (
            (lambda o: (o.representative,)) if self.bits.abelian else (lambda o: o.members)
        )
        self.unit_orbit = None
        if cfg.prune_multipliers and g.cyclic and g.order > 2:
            units = set(_units(g.order))
            self.unit_orbit = [o.representative in units for o in self.orbits]
        self.nodes = 0
        self.deadline = time.monotonic() + cfg.time_budget if cfg.time_budget > 0 else None

    def run(self) -> SearchOutcome:
        t0 = time.monotonic()
        X = [0] * self.na
        banned = [0] * self.na
        try:
            result = self._dfs(0, X, banned, self.bits.full)
        except _Timeout:
            return SearchOutcome(self.g.spec, TIMEOUT, None, self.nodes, time.monotonic() - t0)
        elapsed = time.monotonic() - t0
        if result is None:
            return SearchOutcome(self.g.spec, NONE, None, self.nodes, elapsed)
        coloring = Coloring(
            self.g,
            {a: frozenset(x for x in range(self.g.order) if result[i] >> x & 1)
             for i, a in enumerate(self.s.diversity_atoms)},
        )
        report = verify(self.s, coloring)
        if not report.valid:  # pragma: no cover - soundness guard
            raise AssertionError(f"search produced an invalid coloring: {report.violations[:3]}")
        return SearchOutcome(self.g.spec, FOUND, coloring, self.nodes, elapsed)

    def _witness_ok(self, X, banned, U) -> bool:
        """Every assigned element still has a possible witness for each allowed cycle."""
        bits = self.bits
        avail = [X[i] | (U & ~banned[i]) for i in range(self.na)]
        for k, flanks in enumerate(self.targets):
            if not flanks or not X[k]:
                continue
            for oi, o in enumerate(self.orbits):
                if not (X[k] & self.orbit_mask[oi]):
                    continue
                for x in self.check_elems(o):
                    for i, j in flanks:
                        if not bits.meets(avail[i], avail[j], x):
                            return False
        return True

    def _dfs(self, depth, X, banned, U):
        self.nodes += 1
        if self.deadline is not None and self.nodes & 0x3FF == 0 and time.monotonic() > self.deadline:
            raise _Timeout
        if depth == len(self.orbits):
            if all(X) and self._witness_ok(X, banned, 0):
                return X
            return None
        # classes still empty must be fillable by the remaining orbits
        empty = sum(1 for m in X if not m)
        if empty > len(self.orbits) - depth:
            return None
        om = self.orbit_mask[depth]
        orbit = self.orbits[depth]
        bits = self.bits
        U2 = U & ~om
        for a in range(self.na):
            if banned[a] & om:
                continue
            if self.unit_orbit is not None and self.unit_orbit[depth] and depth > 0:
                # color of 1 (orbit 0) must be minimal over unit orbits
                if a < self._first_color(X):
                    continue
            X2 = X.copy()
            X2[a] |= om
            banned2 = banned.copy()
            ok = True
            for j, k in self.forb[a]:
                t = 0
                for e in orbit.members:
                    t |= bits.translate(X2[j], e)
                t = bits.close(t)
                if t & X2[k]:
                    ok = False
                    break
                banned2[k] |= t
            if not ok:
                continue
            # unassigned orbits with every atom banned
            dead = U2
            for b in banned2:
                dead &= b
            if dead:
                continue
            if not self._witness_ok(X2, banned2, U2):
                continue
            res = self._dfs(depth + 1, X2, banned2, U2)
            if res is not None:
                return res
        return None

    def _first_color(self, X) -> int:
        for a, m in enumerate(X):
            if m & 2:
                return a
        return 0


# --- spectra and sweeps ------------------------------------------------------

@dataclass
class SpectrumResult:
    structure: str
    n_min: int
    n_max: int
    outcomes: dict[int, SearchOutcome] = field(default_factory=dict)

    @property
    def found(self) -> list[int]:
        return sorted(n for n, o in self.outcomes.items() if o.result == FOUND)

    @property
    def partial(self) -> bool:
        return any(o.result == TIMEOUT for o in self.outcomes.values())

    @property
    def timed_out(self) -> list[int]:
        return sorted(n for n, o in self.outcomes.items() if o.result == TIMEOUT)


def _search_modulus(args) -> tuple[int, SearchOutcome]:
    s, n, cfg = args
    g = cyclic_group(n)
    if len(inverse_orbits(g)) < len(s.diversity_atoms):
        # too few orbits to give every atom a nonempty class
        return n, SearchOutcome(g.spec, NONE)
    return n, search_group(s, g, cfg)


def spectrum(s: AtomStructure, n_min: int, n_max: int, cfg: SearchConfig | None = None,
             on_result: Callable[[int, SearchOutcome], None] | None = None) -> SpectrumResult:
    """Search Z/n for every n in ``[n_min, n_max]``.

    Workers own whole moduli; ``on_result`` is called as results arrive.
    """
    cfg = cfg or SearchConfig()
    if not 1 <= n_min <= n_max:
        raise ValueError("need 1 <= n_min <= n_max")
    if cfg.prune_multipliers:
        raise ValueError("multiplier pruning is for existence search only, not spectra")
    if not validate_ra(s):
        raise ValueError(f"{s.name} is not an integral relation algebra atom structure")
    out = SpectrumResult(s.name, n_min, n_max)
    jobs = [(s, n, cfg) for n in range(n_min, n_max + 1)]
    if cfg.parallel_width > 1:
        with ProcessPoolExecutor(cfg.parallel_width) as pool:
            for n, o in pool.map(_search_modulus, jobs):
                out.outcomes[n] = o
                if on_result:
                    on_result(n, o)
    else:
        for job in jobs:
            n, o = _search_modulus(job)
            out.outcomes[n] = o
            if on_result:
                on_result(n, o)
    return out


def match_table(structures: list[AtomStructure], n_max: int, cfg: SearchConfig | None = None) -> dict:
    """Spectra of the given structures over ``[2, n_max]``, for comparison
    with a published table truncated at ``n_max``."""
    rows = {}
    partial = False
    for s in structures:
        res = spectrum(s, 2, n_max, cfg)
        rows[s.name] = {"structure": s, "spectrum": res.found, "minimum": min(res.found, default=None)}
        partial |= res.partial
    minima = sorted(r["minimum"] for r in rows.values() if r["minimum"] is not None)
    return {"rows": rows, "minima": minima, "partial": partial}


def log_record(path, algebra: str, outcome: SearchOutcome, certificate: str | None = None) -> dict:
    """Append one line to a JSON-lines results log."""
    rec = {
        "algebra": algebra,
        "group": outcome.group,
        "verdict": outcome.result,
        "certificate": certificate,
        "nodes": outcome.nodes,
        "wall_time": round(outcome.wall_time, 6),
    }
    with open(path, "a") as fh:
        fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return rec


def write_certificate(outcome: SearchOutcome, directory, algebra: str) -> str:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"{algebra}_{outcome.group}.json"
    save_coloring(outcome.coloring, path)
    return str(path)
