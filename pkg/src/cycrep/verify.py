"""Checking colorings of group elements against an atom structure.

A coloring assigns every non-identity element of a group to one diversity
atom.  It represents the structure when no forbidden cycle is realized by a
product ``y*z = x`` and every allowed cycle is realized at every element of
each of its target classes.

This module is intentionally simple (plain sets and loops); the search
engine uses its own bitmask machinery and is checked against it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .algebra import AtomStructure, allowed_cycles, cycle_str, distinct_targets
from .groups import FiniteGroup, parse_group

DEFAULT_CAP = 10_000

NOT_PARTITION = "not-partition"
EMPTY_CLASS = "empty-class"
NOT_INVERSE_CLOSED = "not-inverse-closed"
FORBIDDEN_WITNESSED = "forbidden-witnessed"
MANDATORY_UNWITNESSED = "mandatory-unwitnessed"


@dataclass(frozen=True)
class Coloring:
    group: FiniteGroup
    classes: Mapping[str, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(
            self, "classes", {a: frozenset(int(x) for x in xs) for a, xs in self.classes.items()}
        )

    def color_of(self) -> dict[int, str]:
        out = {}
        for a, xs in self.classes.items():
            for x in xs:
                out.setdefault(x, a)
        return out

    def relabel(self, mapping: Mapping[str, str]) -> "Coloring":
        return Coloring(self.group, {mapping[a]: xs for a, xs in self.classes.items()})

    def to_dict(self) -> dict:
        return {
            "group": self.group.spec,
            "classes": {a: sorted(xs) for a, xs in self.classes.items()},
        }


def coloring_from_dict(data: dict) -> Coloring:
    try:
        group = parse_group(data["group"])
        classes = {str(a): frozenset(int(x) for x in xs) for a, xs in data["classes"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed coloring description: {exc}") from exc
    return Coloring(group, classes)


def load_coloring(path) -> Coloring:
    p = Path(path)
    if not p.exists() and Path(str(path) + ".json").exists():
        p = Path(str(path) + ".json")
    return coloring_from_dict(json.loads(p.read_text()))


def save_coloring(c: Coloring, path) -> None:
    Path(path).write_text(json.dumps(c.to_dict(), indent=1) + "\n")


@dataclass(frozen=True)
class Violation:
    kind: str
    data: dict

    def __str__(self):
        items = " ".join(f"{k}={v}" for k, v in self.data.items())
        return f"{self.kind} {items}"


@dataclass
class VerificationReport:
    violations: list[Violation] = field(default_factory=list)
    truncated: bool = False

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def status(self) -> str:
        return "valid" if self.valid else "invalid"

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __bool__(self):
        return self.valid


def check_partition(c: Coloring, cap: int = DEFAULT_CAP) -> list[Violation]:
    g = c.group
    out: list[Violation] = []
    seen: dict[int, list[str]] = {}
    for a, xs in c.classes.items():
        for x in sorted(xs):
            seen.setdefault(x, []).append(a)
    for x in sorted(seen):
        if not 0 < x < g.order:
            out.append(Violation(NOT_PARTITION, {"element": x, "reason": "not a non-identity element"}))
        elif len(seen[x]) > 1:
            out.append(Violation(NOT_PARTITION, {"element": x, "reason": "in classes " + ",".join(seen[x])}))
    for x in g.non_identity():
        if x not in seen:
            out.append(Violation(NOT_PARTITION, {"element": x, "reason": "uncolored"}))
    for a, xs in c.classes.items():
        if not xs:
            out.append(Violation(EMPTY_CLASS, {"atom": a}))
        for x in sorted(xs):
            if 0 < x < g.order and g.inv(x) not in xs:
                out.append(Violation(NOT_INVERSE_CLOSED, {"atom": a, "element": x, "inverse": g.inv(x)}))
    return out[:cap]


def check_forbidden(s: AtomStructure, c: Coloring, cap: int = DEFAULT_CAP) -> list[Violation]:
    """One orientation per forbidden multiset: report every ``y*z = x`` with
    ``y, z, x`` in the classes of the cycle's atoms (in sorted order)."""
    g = c.group
    out: list[Violation] = []
    for cyc in s.sorted_forbidden():
        i, j, k = cyc
        target = c.classes[k]
        for y in sorted(c.classes[i]):
            for z in sorted(c.classes[j]):
                x = g.op(y, z)
                if x in target:
                    out.append(Violation(FORBIDDEN_WITNESSED, {"cycle": cycle_str(cyc), "y": y, "z": z, "x": x}))
                    if len(out) >= cap:
                        return out
    return out


def check_mandatory(s: AtomStructure, c: Coloring, cap: int = DEFAULT_CAP) -> list[Violation]:
    """Every element ``x`` of a target class needs some ``y*z = x`` with ``y``, ``z``
    in the flanking classes, for each allowed cycle and each distinct target."""
    g = c.group
    out: list[Violation] = []
    order = {a: n for n, a in enumerate(s.diversity_atoms)}
    for cyc in sorted(allowed_cycles(s), key=lambda cy: [order[a] for a in cy]):
        for i, j, k in distinct_targets(cyc):
            right = c.classes[j]
            for x in sorted(c.classes[k]):
                # y*z = x  <=>  z = inv(y)*x
                if not any(g.op(g.inv(y), x) in right for y in c.classes[i]):
                    out.append(Violation(MANDATORY_UNWITNESSED, {"cycle": cycle_str(cyc), "target": k, "x": x}))
                    if len(out) >= cap:
                        return out
    return out


def verify(s: AtomStructure, c: Coloring, cap: int = DEFAULT_CAP) -> VerificationReport:
    if set(c.classes) != set(s.diversity_atoms):
        raise ValueError(
            f"coloring classes {sorted(c.classes)} do not match atoms {list(s.diversity_atoms)}"
        )
    violations = check_partition(c, cap)
    if not violations:
        violations = check_forbidden(s, c, cap)
        violations += check_mandatory(s, c, cap - len(violations))
    return VerificationReport(violations[:cap], truncated=len(violations) >= cap)


# --- Ramsey ----------------------------------------------------------------

@dataclass
class RamseyReport:
    cliques: dict[str, tuple[int, ...] | None]

    @property
    def clique_free(self) -> bool:
        return all(v is None for v in self.cliques.values())


def _find_clique(n: int, diffs: frozenset[int], t: int) -> tuple[int, ...] | None:
    """A t-clique in the circulant graph on Z/n with connection set ``diffs``.

    The graph is vertex-transitive, so only cliques through vertex 0 are tried.
    """
    adj = [0] * n
    for u in range(n):
        for d in diffs:
            adj[u] |= 1 << ((u + d) % n)

    def extend(clique, cand):
        if len(clique) == t:
            return tuple(clique)
        while cand:
            if len(clique) + cand.bit_count() < t:
                return None
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            found = extend(clique + [v], cand & adj[v])
            if found:
                return found
        return None

    if t == 1:
        return (0,)
    res = extend([0], adj[0])
    return tuple(sorted(res)) if res else None


def ramsey_check(c: Coloring, bounds: Mapping[str, int]) -> RamseyReport:
    """Look for a monochromatic K_t in each class of a circulant coloring."""
    if not c.group.cyclic:
        raise ValueError("Ramsey check is defined only for colorings of cyclic groups")
    unknown = set(bounds) - set(c.classes)
    if unknown:
        raise ValueError(f"bounds reference unknown atoms {sorted(unknown)}")
    cliques = {}
    for atom, t in bounds.items():
        if t < 3:
            raise ValueError(f"clique bound for {atom} must be at least 3")
        cliques[atom] = _find_clique(c.group.order, c.classes[atom], t)
    return RamseyReport(cliques)
