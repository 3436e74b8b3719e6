"""Symmetric integral relation algebra atom structures.

An atom structure is given by its diversity atoms (the identity atom is
implicit) and the set of forbidden diversity cycles.  All atoms are
self-converse, so a cycle is just a sorted 3-multiset of atom names.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

IDENTITY = "1'"

Cycle = tuple[str, str, str]


def make_cycle(atoms: Iterable[str]) -> Cycle:
    """Normalize three atom names to a sorted multiset (``"cbb"`` -> ``("b", "b", "c")``)."""
    atoms = tuple(atoms)
    if len(atoms) != 3:
        raise ValueError(f"a cycle has exactly 3 atoms, got {atoms!r}")
    return tuple(sorted(atoms))  # type: ignore[return-value]


def cycle_str(cycle: Cycle) -> str:
    return "".join(cycle) if all(len(a) == 1 for a in cycle) else ",".join(cycle)


@dataclass(frozen=True)
class AtomStructure:
    name: str
    diversity_atoms: tuple[str, ...]
    forbidden: frozenset[Cycle] = field(default_factory=frozenset)

    def __post_init__(self):
        atoms = tuple(self.diversity_atoms)
        object.__setattr__(self, "diversity_atoms", atoms)
        if len(set(atoms)) != len(atoms):
            raise ValueError(f"duplicate atom names in {atoms!r}")
        if IDENTITY in atoms:
            raise ValueError("the identity atom is implicit and must not be listed")
        forb = frozenset(make_cycle(c) for c in self.forbidden)
        for c in forb:
            for a in c:
                if a not in atoms:
                    raise ValueError(f"forbidden cycle {cycle_str(c)} uses unknown atom {a!r}")
        object.__setattr__(self, "forbidden", forb)

    @classmethod
    def from_strings(cls, name: str, atoms: Sequence[str], forbidden: Iterable[Sequence[str]]):
        """Convenience constructor: ``from_strings("63_65", "abc", ["bbb", "ccc"])``."""
        return cls(name, tuple(atoms), frozenset(make_cycle(c) for c in forbidden))

    def all_cycles(self) -> list[Cycle]:
        return list(itertools.combinations_with_replacement(self.diversity_atoms, 3))

    def sorted_forbidden(self) -> list[Cycle]:
        order = {a: i for i, a in enumerate(self.diversity_atoms)}
        return sorted(self.forbidden, key=lambda c: [order[a] for a in c])

    def relabel(self, mapping: dict[str, str], name: str | None = None) -> "AtomStructure":
        return AtomStructure(
            self.name if name is None else name,
            self.diversity_atoms,
            frozenset(make_cycle(mapping[a] for a in c) for c in self.forbidden),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "diversity_atoms": list(self.diversity_atoms),
            "forbidden": [list(c) for c in self.sorted_forbidden()],
        }

    def __str__(self):
        forb = ", ".join(cycle_str(c) for c in self.sorted_forbidden()) or "-"
        return f"{self.name} [{''.join(self.diversity_atoms)}] forbidden: {forb}"


def allowed_cycles(s: AtomStructure) -> set[Cycle]:
    return {c for c in s.all_cycles() if c not in s.forbidden}


def flexible_atoms(s: AtomStructure) -> set[str]:
    used = {a for c in s.forbidden for a in c}
    return {a for a in s.diversity_atoms if a not in used}


def distinct_targets(cycle: Cycle) -> list[tuple[str, str, str]]:
    """Each distinct way to pick a target atom of the cycle: ``(i, j, k)`` with
    target ``k`` and flanks ``i <= j``."""
    out = []
    for idx, k in enumerate(cycle):
        if k in cycle[:idx]:
            continue
        i, j = cycle[:idx] + cycle[idx + 1:]
        out.append((i, j, k))
    return out


def orientations(cycle: Cycle) -> list[tuple[str, str, str]]:
    """Distinct ordered triples obtained by permuting the multiset."""
    return sorted(set(itertools.permutations(cycle)))


# --- validity -------------------------------------------------------------

@dataclass
class ValidityReport:
    valid: bool
    empty_compositions: list[tuple[str, str]] = field(default_factory=list)
    non_associative: list[tuple[str, str, str]] = field(default_factory=list)

    def __bool__(self):
        return self.valid


def composition_table(s: AtomStructure) -> dict[tuple[str, str], frozenset[str]]:
    """Atom-level composition x;y for diversity atoms (identity included when x = y)."""
    allowed = allowed_cycles(s)
    table = {}
    for x in s.diversity_atoms:
        for y in s.diversity_atoms:
            comp = {k for k in s.diversity_atoms if make_cycle((x, y, k)) in allowed}
            if x == y:
                comp.add(IDENTITY)
            table[x, y] = frozenset(comp)
    return table


def _compose_sets(table, xs: Iterable[str], ys: Iterable[str]) -> frozenset[str]:
    out: set[str] = set()
    for x in xs:
        for y in ys:
            if x == IDENTITY:
                out.add(y)
            elif y == IDENTITY:
                out.add(x)
            else:
                out |= table[x, y]
    return frozenset(out)


def validate_ra(s: AtomStructure) -> ValidityReport:
    """Check integrality and atom-level associativity of the complex algebra."""
    table = composition_table(s)
    atoms = s.diversity_atoms
    empty = [(x, y) for x in atoms for y in atoms if not table[x, y]]
    bad = []
    for x, y, z in itertools.product(atoms, repeat=3):
        left = _compose_sets(table, table[x, y], [z])
        right = _compose_sets(table, [x], table[y, z])
        if left != right:
            bad.append((x, y, z))
    return ValidityReport(not empty and not bad, empty, bad)


# --- canonical forms and enumeration --------------------------------------

def _forbidden_key(forbidden: Iterable[Cycle], rank: dict[str, int]) -> tuple:
    return tuple(sorted(tuple(sorted(rank[a] for a in c)) for c in forbidden))


def canonicalize(s: AtomStructure) -> AtomStructure:
    """Relabel atoms so that the sorted forbidden-cycle list is lex-minimal.

    Atom names are kept as the sorted list of the original names; only the
    assignment of roles to names changes.
    """
    names = sorted(s.diversity_atoms)
    rank = {a: i for i, a in enumerate(names)}
    best = None
    best_map = None
    for perm in itertools.permutations(names):
        mapping = dict(zip(names, perm))
        key = _forbidden_key((tuple(mapping[a] for a in c) for c in s.forbidden), rank)
        if best is None or key < best:
            best, best_map = key, mapping
    relabeled = s.relabel(best_map)
    return AtomStructure(s.name, tuple(names), relabeled.forbidden)


def is_isomorphic(s: AtomStructure, t: AtomStructure) -> bool:
    if len(s.diversity_atoms) != len(t.diversity_atoms):
        return False
    cs, ct = canonicalize(s), canonicalize(t)
    rank_s = {a: i for i, a in enumerate(cs.diversity_atoms)}
    rank_t = {a: i for i, a in enumerate(ct.diversity_atoms)}
    return _forbidden_key(cs.forbidden, rank_s) == _forbidden_key(ct.forbidden, rank_t)


def default_atom_names(k: int) -> tuple[str, ...]:
    if k <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:k])
    return tuple(f"x{i}" for i in range(k))


def enumerate_structures(num_diversity_atoms: int, flexible_only: bool = False) -> list[AtomStructure]:
    """All symmetric integral atom structures on ``num_diversity_atoms`` diversity
    atoms, up to relabeling, in lex order of the canonical forbidden set."""
    if num_diversity_atoms < 1:
        raise ValueError("need at least one diversity atom")
    atoms = default_atom_names(num_diversity_atoms)
    rank = {a: i for i, a in enumerate(atoms)}
    cycles = list(itertools.combinations_with_replacement(atoms, 3))
    seen = {}
    for bits in range(1 << len(cycles)):
        forb = frozenset(c for i, c in enumerate(cycles) if bits >> i & 1)
        s = AtomStructure("", atoms, forb)
        canon = canonicalize(s)
        key = _forbidden_key(canon.forbidden, rank)
        if key in seen:
            continue
        if not validate_ra(canon):
            seen[key] = None
            continue
        seen[key] = canon
    found = sorted((k, s) for k, s in seen.items() if s is not None)
    out = []
    for idx, (_, s) in enumerate(found, 1):
        if flexible_only and not flexible_atoms(s):
            continue
        out.append(AtomStructure(f"s{num_diversity_atoms}_{idx}", s.diversity_atoms, s.forbidden))
    return out


# --- catalog and files ----------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    structure: AtomStructure
    provenance: str


CATALOG: dict[str, CatalogEntry] = {
    "63_65": CatalogEntry(
        AtomStructure.from_strings("63_65", "abc", ["bbb", "ccc"]),
        "forbidden cycles bbb, ccc; cyclic representation over Z/29 (Alm)",
    ),
    "57_65": CatalogEntry(
        AtomStructure.from_strings("57_65", "abc", ["ccc", "cbb"]),
        "forbidden cycles ccc, cbb; cyclic representation over Z/46 (Alm)",
    ),
    "33_65": CatalogEntry(
        AtomStructure.from_strings("33_65", "abc", ["ccc", "bcc", "cbb"]),
        "forbidden cycles ccc, bcc, cbb; no cyclic representation over Z/n for n <= 100 (Alm)",
    ),
}


def catalog(name: str) -> AtomStructure:
    try:
        return CATALOG[name].structure
    except KeyError:
        raise KeyError(f"unknown algebra {name!r}; known: {', '.join(CATALOG)}") from None


def structure_from_dict(data: dict) -> AtomStructure:
    try:
        return AtomStructure(
            str(data["name"]),
            tuple(str(a) for a in data["diversity_atoms"]),
            frozenset(make_cycle(str(a) for a in c) for c in data["forbidden"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed algebra description: {exc}") from exc


def load_structure(path) -> AtomStructure:
    return structure_from_dict(json.loads(Path(path).read_text()))


def save_structure(s: AtomStructure, path) -> None:
    Path(path).write_text(json.dumps(s.to_dict(), indent=2) + "\n")


def resolve_structure(ref: str) -> AtomStructure:
    """Catalog name or path to an algebra file."""
    if ref in CATALOG:
        return CATALOG[ref].structure
    p = Path(ref)
    if not p.exists() and Path(ref + ".json").exists():
        p = Path(ref + ".json")
    if not p.exists():
        raise KeyError(f"{ref!r} is neither a catalog algebra ({', '.join(CATALOG)}) nor a file")
    return load_structure(p)
