"""Small finite groups as dense multiplication tables.

Elements are the indices ``0 .. order-1`` and the identity is always 0.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class GroupAxiomError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    inverse: np.ndarray
    spec: str = ""
    cyclic: bool = False
    labels: tuple = field(default=(), repr=False)

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def op(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverse[x])

    @property
    def elements(self) -> range:
        return range(self.order)

    def non_identity(self) -> range:
        return range(1, self.order)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"FiniteGroup({self.spec or 'order ' + str(self.order)})"


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(table, (-idx) % n, spec=f"z{n}", cyclic=True)


def _check_axioms(table: np.ndarray) -> np.ndarray:
    """Return the inverse map of a table whose identity is 0, or raise."""
    n = table.shape[0]
    idx = np.arange(n)
    if not (np.array_equal(table[0], idx) and np.array_equal(table[:, 0], idx)):
        raise GroupAxiomError("element 0 is not a two-sided identity")
    inverse = np.full(n, -1)
    for x in range(n):
        right = np.flatnonzero(table[x] == 0)
        left = np.flatnonzero(table[:, x] == 0)
        common = np.intersect1d(right, left)
        if len(common) == 0:
            raise GroupAxiomError(f"no inverse for {x}")
        inverse[x] = common[0]
    # (xy)z == x(yz) for every triple
    lhs = table[table, :]            # lhs[x, y, z] = table[table[x, y], z]
    rhs = table[:, table]            # rhs[x, y, z] = table[x, table[y, z]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        x, y, z = (int(v) for v in bad[0])
        raise GroupAxiomError(f"not associative at ({x}, {y}, {z})")
    return inverse


def cayley_group(table, spec: str = "") -> FiniteGroup:
    """Validate a Cayley table and return the group, moving the identity to index 0.

    The returned group's ``labels[i]`` is the original index of element ``i``.
    """
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupAxiomError("Cayley table must be a non-empty square matrix")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise GroupAxiomError("table entries must be element indices 0..order-1")
    idx = np.arange(n)
    ident = [e for e in range(n) if np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx)]
    if not ident:
        raise GroupAxiomError("no identity element")
    e = ident[0]
    # re-index so the identity becomes 0
    order = [e] + [x for x in range(n) if x != e]
    new_of_old = np.empty(n, dtype=np.int64)
    new_of_old[order] = idx
    old = np.array(order)
    t2 = new_of_old[t[np.ix_(old, old)]]
    inverse = _check_axioms(t2)
    return FiniteGroup(t2, inverse, spec=spec or f"cayley({n})", labels=tuple(order))


def symmetric_group(k: int) -> FiniteGroup:
    """S_k acting on {0..k-1}; elements in lex order of one-line notation.

    Product is composition ``(p*q)(i) = p(q(i))``.
    """
    if not 1 <= k <= 5:
        raise ValueError("symmetric_group supports 1 <= k <= 5")
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    n = math.factorial(k)
    table = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[tuple(p[q[a]] for a in range(k))]
    inverse = _check_axioms(table)
    return FiniteGroup(table, inverse, spec=f"s{k}", labels=tuple(perms))


@dataclass(frozen=True)
class InverseOrbit:
    representative: int
    members: tuple[int, ...]


def inverse_orbits(g: FiniteGroup) -> list[InverseOrbit]:
    out = []
    for x in g.non_identity():
        y = g.inv(x)
        if y < x:
            continue
        out.append(InverseOrbit(x, (x,) if x == y else (x, y)))
    return out


def load_cayley_table(path) -> np.ndarray:
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty Cayley table file")
    try:
        n = int(lines[0][0])
        rows = [[int(v) for v in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"{path}: expected {n} rows of {n} entries")
    return np.array(rows, dtype=np.int64)


def save_cayley_table(g: FiniteGroup, path) -> None:
    lines = [str(g.order)] + [" ".join(str(int(v)) for v in row) for row in g.table]
    Path(path).write_text("\n".join(lines) + "\n")


def parse_group(spec: str) -> FiniteGroup:
    """``zN`` (cyclic), ``sK`` (symmetric) or ``cayley:<path>``."""
    spec = spec.strip()
    if spec.startswith("cayley:"):
        return cayley_group(load_cayley_table(spec[7:]), spec=spec)
    kind, num = spec[:1].lower(), spec[1:]
    if kind in "zs" and num.isdigit():
        return cyclic_group(int(num)) if kind == "z" else symmetric_group(int(num))
    raise ValueError(f"bad group spec {spec!r} (expected zN, sK or cayley:<path>)")
