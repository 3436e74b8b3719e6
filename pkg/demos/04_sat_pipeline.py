# %% [markdown]
# # SAT route: encode, solve externally, decode, verify

# %%
import sys
import tempfile
from pathlib import Path

from cycrep import catalog, verify
from cycrep.sat import decode, emit_dimacs, encode, solve_external

s = catalog("63_65")
inst = encode(s, 29)
print(inst.num_vars, "variables,", len(inst.clauses), "clauses")

# %%
tmp = Path(tempfile.mkdtemp())
emit_dimacs(inst, tmp / "63_65_z29.cnf", tmp / "63_65_z29.map")
print((tmp / "63_65_z29.cnf").read_text().splitlines()[:4])
print((tmp / "63_65_z29.map").read_text().splitlines()[:3])

# %% [markdown]
# Any DIMACS solver printing `s`/`v` lines works; the package ships a small
# front end to CaDiCaL (python-sat).

# %%
solver = f"{sys.executable} -m cycrep.dimacs_solver"
res = solve_external(inst, solver, s, 29)
print(res.status, {a: sorted(xs) for a, xs in res.coloring.classes.items()})

# %%
again = decode(tmp / "63_65_z29.map", res.model, s, 29)
print("verify:", verify(s, again).status)

# %%
s33 = catalog("33_65")
for n in (29, 40, 50):
    print(n, solve_external(encode(s33, n), solver, s33, n).status)
