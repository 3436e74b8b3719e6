"""Minimal DIMACS front end for the CaDiCaL binding in python-sat.

Usage: ``python -m cycrep.dimacs_solver instance.cnf``.  Prints the usual
``s``/``v`` lines and exits 10 (sat) or 20 (unsat), so it can stand in for a
standalone solver binary.
"""
import sys
from pathlib import Path

from pysat.solvers import Solver

from .sat import parse_dimacs


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m cycrep.dimacs_solver FILE.cnf", file=sys.stderr)
        return 1
    _, clauses = parse_dimacs(Path(argv[0]).read_text())
    with Solver(name="cadical195", bootstrap_with=clauses) as solver:
        if not solver.solve():
            print("s UNSATISFIABLE")
            return 20
        model = solver.get_model()
    print("s SATISFIABLE")
    for start in range(0, len(model), 20):
        print("v " + " ".join(map(str, model[start:start + 20])))
    print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
