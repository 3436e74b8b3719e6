"""Verification, search and SAT encoding for cyclic-group representations of
small symmetric integral relation algebras."""
from .algebra import (
    CATALOG,
    AtomStructure,
    allowed_cycles,
    canonicalize,
    catalog,
    enumerate_structures,
    flexible_atoms,
    validate_ra,
)
from .groups import FiniteGroup, cayley_group, cyclic_group, inverse_orbits, parse_group, symmetric_group
from .search import SearchConfig, SearchOutcome, match_table, search_group, spectrum
from .verify import Coloring, load_coloring, ramsey_check, verify

__version__ = "0.1.0"
