import itertools

import pytest
from hypothesis import given, strategies as st

from cycrep.algebra import (
    CATALOG,
    AtomStructure,
    allowed_cycles,
    canonicalize,
    catalog,
    composition_table,
    distinct_targets,
    enumerate_structures,
    flexible_atoms,
    is_isomorphic,
    load_structure,
    make_cycle,
    resolve_structure,
    save_structure,
    validate_ra,
)

ABC_CYCLES = list(itertools.combinations_with_replacement("abc", 3))


def structure_from_bits(bits, atoms="abc"):
    cycles = list(itertools.combinations_with_replacement(atoms, 3))
    return AtomStructure("t", tuple(atoms), frozenset(c for i, c in enumerate(cycles) if bits >> i & 1))


def test_cycles_are_multisets():
    assert make_cycle("cbb") == make_cycle("bbc") == ("b", "b", "c")
    assert make_cycle("bcc") != make_cycle("cbb")
    with pytest.raises(ValueError):
        make_cycle("ab")


def test_structure_rejects_unknown_atoms_and_identity():
    with pytest.raises(ValueError):
        AtomStructure.from_strings("x", "ab", ["abd"])
    with pytest.raises(ValueError):
        AtomStructure("x", ("a", "1'"), frozenset())
    with pytest.raises(ValueError):
        AtomStructure("x", ("a", "a"), frozenset())


def test_catalog_entries():
    assert set(CATALOG) == {"63_65", "57_65", "33_65"}
    assert catalog("63_65").forbidden == {make_cycle("bbb"), make_cycle("ccc")}
    assert catalog("57_65").forbidden == {make_cycle("ccc"), make_cycle("cbb")}
    assert catalog("33_65").forbidden == {make_cycle("ccc"), make_cycle("bcc"), make_cycle("cbb")}
    for entry in CATALOG.values():
        assert entry.structure.diversity_atoms == ("a", "b", "c")
    with pytest.raises(KeyError):
        catalog("1_7")


def test_allowed_cycles_counts(ra63, ra33):
    assert len(allowed_cycles(ra63)) == 8
    assert len(allowed_cycles(ra33)) == 7
    only_a = AtomStructure.from_strings("x", "a", [])
    assert allowed_cycles(only_a) == {("a", "a", "a")}


def test_flexible_atoms(ra63, ra33, ra57):
    assert flexible_atoms(ra63) == {"a"}
    assert flexible_atoms(ra33) == {"a"}
    assert flexible_atoms(ra57) == {"a"}
    none = AtomStructure.from_strings("x", "abc", ["aaa", "bbb", "ccc"])
    assert flexible_atoms(none) == set()


def test_validate_ra_examples(ra63):
    assert validate_ra(ra63)
    bad = AtomStructure.from_strings("x", "ab", ["aab", "abb"])
    rep = validate_ra(bad)
    assert not rep
    assert ("a", "b") in rep.empty_compositions
    one = AtomStructure.from_strings("x", "a", ["aaa"])
    assert validate_ra(one)
    assert composition_table(one)["a", "a"] == {"1'"}


def test_validate_catalog():
    for entry in CATALOG.values():
        assert validate_ra(entry.structure)


def _brute_canonical_key(s):
    names = sorted(s.diversity_atoms)
    keys = []
    for perm in itertools.permutations(names):
        m = dict(zip(names, perm))
        keys.append(tuple(sorted(tuple(sorted(m[a] for a in c)) for c in s.forbidden)))
    return min(keys)


def test_canonicalize_swap():
    s = AtomStructure.from_strings("x", "ab", ["aaa"])
    t = AtomStructure.from_strings("x", "ab", ["bbb"])
    assert canonicalize(s) == canonicalize(t)


def test_canonicalize_63_65_by_enumeration(ra63):
    # minimum over the 6 relabelings, computed directly
    expected = _brute_canonical_key(ra63)
    assert expected == (("a", "a", "a"), ("b", "b", "b"))
    assert canonicalize(ra63).sorted_forbidden() == [("a", "a", "a"), ("b", "b", "b")]


def test_canonicalize_idempotent_and_orbit_constant_all_3_atom_sets():
    for bits in range(1 << len(ABC_CYCLES)):
        s = structure_from_bits(bits)
        c = canonicalize(s)
        assert canonicalize(c) == c
        assert tuple(c.sorted_forbidden()) == _brute_canonical_key(s)


def test_is_isomorphic():
    s = AtomStructure.from_strings("x", "abc", ["ccc", "cbb"])
    t = AtomStructure.from_strings("y", "abc", ["aaa", "abb"])
    assert is_isomorphic(s, t)
    assert not is_isomorphic(s, AtomStructure.from_strings("z", "abc", ["aaa", "aab"]))


def test_enumeration_counts():
    assert len(enumerate_structures(1)) == 2
    assert len(enumerate_structures(2)) == 7
    assert len(enumerate_structures(3)) == 65
    assert len(enumerate_structures(3, flexible_only=True)) == 10
    with pytest.raises(ValueError):
        enumerate_structures(0)


def test_enumeration_distinct_and_deterministic():
    first = enumerate_structures(3)
    assert first == enumerate_structures(3)
    keys = [tuple(canonicalize(s).sorted_forbidden()) for s in first]
    assert len(set(keys)) == len(keys)
    assert keys == sorted(keys)


def test_catalog_algebras_appear_among_flexible_structures():
    flex = enumerate_structures(3, flexible_only=True)
    for entry in CATALOG.values():
        assert any(is_isomorphic(entry.structure, s) for s in flex)


def test_distinct_targets():
    assert distinct_targets(("a", "a", "a")) == [("a", "a", "a")]
    assert distinct_targets(("a", "b", "b")) == [("b", "b", "a"), ("a", "b", "b")]
    assert len(distinct_targets(("a", "b", "c"))) == 3


def test_algebra_file_round_trip(tmp_path, ra57):
    p = tmp_path / "57_65.json"
    save_structure(ra57, p)
    assert load_structure(p) == ra57
    assert resolve_structure(str(p)) == ra57
    assert resolve_structure(str(tmp_path / "57_65")) == ra57
    assert resolve_structure("33_65") == catalog("33_65")
    with pytest.raises(KeyError):
        resolve_structure(str(tmp_path / "nope"))


perms_abc = st.permutations("abc")


@given(st.integers(0, (1 << 10) - 1), perms_abc)
def test_relabel_invariance(bits, perm):
    s = structure_from_bits(bits)
    m = dict(zip("abc", perm))
    t = s.relabel(m)
    assert bool(validate_ra(s)) == bool(validate_ra(t))
    assert flexible_atoms(t) == {m[a] for a in flexible_atoms(s)}
    assert canonicalize(s) == canonicalize(t)


@given(st.integers(0, (1 << 10) - 1))
def test_allowed_and_forbidden_partition(bits):
    s = structure_from_bits(bits)
    allowed = allowed_cycles(s)
    assert not allowed & s.forbidden
    assert allowed | s.forbidden == set(ABC_CYCLES)
