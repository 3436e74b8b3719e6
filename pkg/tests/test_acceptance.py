"""Exit criteria.  Each test carries a ``criterion`` marker; the terminal
summary prints one PASS/FAIL line per criterion."""
import os
import sys
import time
from collections import Counter

import pytest

from cycrep.algebra import CATALOG, catalog, enumerate_structures
from cycrep.groups import cyclic_group, inverse_orbits
from cycrep.sat import dimacs_text, emit_dimacs, encode, solve
from cycrep.search import NONE, SearchConfig, search_group, spectrum
from cycrep.verify import Coloring, ramsey_check, verify

from oracles import naive_first

SOLVER = os.environ.get("CYCREP_SOLVER") or f"{sys.executable} -m cycrep.dimacs_solver"


def _moved(c, x, target):
    classes = {a: set(xs) - {x} for a, xs in c.classes.items()}
    classes[target].add(x)
    return Coloring(c.group, classes)


@pytest.mark.criterion(1, "golden verification of the Z/29 and Z/46 colorings (< 1 s each)")
def test_golden_verification(ra63, ra57, z29_coloring, z46_coloring):
    for s, c in ((ra63, z29_coloring), (ra57, z46_coloring)):
        t0 = time.perf_counter()
        report = verify(s, c)
        assert time.perf_counter() - t0 < 1.0
        assert report.status == "valid"


@pytest.mark.criterion(2, "mutation sensitivity: 146 single-element moves all invalid (< 10 s)")
def test_mutation_sensitivity(ra63, ra57, z29_coloring, z46_coloring):
    t0 = time.perf_counter()
    runs = 0
    for s, c in ((ra63, z29_coloring), (ra57, z46_coloring)):
        colors = c.color_of()
        for x in c.group.non_identity():
            for other in s.diversity_atoms:
                if other == colors[x]:
                    continue
                assert not verify(s, _moved(c, x, other)).valid, (s.name, x, other)
                runs += 1
    assert runs == 28 * 2 + 45 * 2 == 146
    assert time.perf_counter() - t0 < 10.0


@pytest.mark.criterion(3, "Ramsey: Z/29 coloring has no K4 in a, no K3 in b or c (< 5 s)")
def test_ramsey_reproduction(z29_coloring):
    t0 = time.perf_counter()
    report = ramsey_check(z29_coloring, {"a": 4, "b": 3, "c": 3})
    assert report.clique_free
    assert time.perf_counter() - t0 < 5.0


@pytest.mark.criterion(4, "enumeration counts 7 / 65 / 10 flexible (< 30 s)")
def test_enumeration_counts():
    t0 = time.perf_counter()
    assert len(enumerate_structures(2)) == 7
    assert len(enumerate_structures(3)) == 65
    assert len(enumerate_structures(3, flexible_only=True)) == 10
    assert time.perf_counter() - t0 < 30.0


@pytest.mark.criterion(5, "33_65: no representation over Z/n, n in [2,36] by backtracking (< 15 min) "
                          "and n <= 60 via external SAT solver (< 1 h)")
def test_nonexistence_sweep(ra33):
    t0 = time.perf_counter()
    res = spectrum(ra33, 2, 36)
    assert not res.partial
    assert res.found == []
    assert all(o.result == NONE for o in res.outcomes.values())
    assert time.perf_counter() - t0 < 15 * 60

    t0 = time.perf_counter()
    res = spectrum(ra33, 2, 60, SearchConfig(engine="sat", solver_command=SOLVER,
                                             parallel_width=min(4, os.cpu_count() or 1)))
    assert not res.partial
    assert sorted(res.outcomes) == list(range(2, 61))
    assert res.found == []
    assert time.perf_counter() - t0 < 3600


@pytest.mark.criterion(6, "rediscovery of 63_65 over Z/29 by backtracking and by SAT")
def test_rediscovery(ra63):
    t0 = time.perf_counter()
    bt = search_group(ra63, cyclic_group(29))
    assert time.perf_counter() - t0 < 300
    assert bt.found and verify(ra63, bt.coloring).valid
    res = solve(encode(ra63, 29), ra63, 29, solver_command=SOLVER)
    assert res.status == "sat" and verify(ra63, res.coloring).valid


@pytest.mark.criterion(7, "oracle equivalence: SAT == backtracking (catalog, n <= 20); "
                          "backtracking == generate-and-test (2 diversity atoms, n <= 12)")
def test_oracle_equivalence():
    sat_cfg = SearchConfig(engine="sat")
    for name in CATALOG:
        s = catalog(name)
        bt = spectrum(s, 2, 20)
        sat = spectrum(s, 2, 20, sat_cfg)
        assert bt.found == sat.found, name
        assert not bt.partial and not sat.partial
    for s in enumerate_structures(2):
        for n in range(2, 13):
            g = cyclic_group(n)
            if len(inverse_orbits(g)) < 2:
                # no coloring can give both atoms a nonempty class
                assert spectrum(s, n, n).found == []
                continue
            assert (naive_first(s, g) is not None) == search_group(s, g).found, (s, n)


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


TABLE1_CYCLIC = {
    "1_7": lambda n: n == 4,
    "2_7": lambda n: n % 2 == 0 and n >= 6,
    "3_7": lambda n: n % 2 == 0 and n >= 6,
    "4_7": lambda n: n >= 9 and not _is_prime(n) and not (n % 2 == 0 and _is_prime(n // 2)),
    "5_7": lambda n: n == 5,
    "6_7": lambda n: n == 8 or n >= 11,
    "7_7": lambda n: n >= 12,
}


@pytest.mark.criterion(8, "Table 1 cross-check: spectra over [2,14] match the cyclic spectra rows (< 10 min)")
def test_table1_cross_check():
    t0 = time.perf_counter()
    table_rows = Counter(
        tuple(n for n in range(2, 15) if pred(n)) for pred in TABLE1_CYCLIC.values()
    )
    computed = {}
    for s in enumerate_structures(2):
        res = spectrum(s, 2, 14)
        assert not res.partial
        computed[s.name] = tuple(res.found)
        for n in res.found:
            assert verify(s, res.outcomes[n].coloring).valid
    assert Counter(computed.values()) == table_rows
    assert sorted(min(v) for v in computed.values()) == [4, 5, 6, 6, 8, 9, 12]
    assert (9, 12) in computed.values()
    assert (8, 11, 12, 13, 14) in computed.values()
    assert time.perf_counter() - t0 < 600


@pytest.mark.criterion(9, "DIMACS output byte-stable; single-atom n = 3 instance as computed by hand")
def test_format_stability(tmp_path, ra57, single_flexible):
    blobs = []
    for k in range(3):
        emit_dimacs(encode(ra57, 46), tmp_path / f"{k}.cnf", tmp_path / f"{k}.map")
        blobs.append(((tmp_path / f"{k}.cnf").read_bytes(), (tmp_path / f"{k}.map").read_bytes()))
    assert blobs[0] == blobs[1] == blobs[2]

    inst = encode(single_flexible, 3)
    assert inst.varmap.num_color_vars == 1
    text = dimacs_text(inst)
    body = text[text.index("p cnf"):]
    # v1 = orbit {1,2} colored a; d2 = (2,a,2,a) witnesses 1, d3 = (1,a,1,a) witnesses 2
    assert body == "p cnf 3 5\n1 0\n-1 2 0\n-1 3 0\n1 -2 0\n1 -3 0\n"
    emit_dimacs(inst, tmp_path / "one.cnf", tmp_path / "one.map")
    assert (tmp_path / "one.map").read_text() == "v 1 1 a\nd 2 2 a 2 a\nd 3 1 a 1 a\n"
