# %% [markdown]
# # Checking the two published cyclic colorings
#
# 63_65 forbids the cycles bbb and ccc; 57_65 forbids ccc and bbc.
# Each coloring splits the non-identity elements of Z/n into classes a, b, c.

# %%
from pathlib import Path

from cycrep import catalog, load_coloring, ramsey_check, verify
from cycrep.verify import Coloring

FIX = Path(__file__).resolve().parent.parent / "fixtures"

z29 = load_coloring(FIX / "63_65_z29.json")
z46 = load_coloring(FIX / "57_65_z46.json")
print({a: sorted(xs) for a, xs in z29.classes.items()})

# %%
print("63_65 over Z/29:", verify(catalog("63_65"), z29).status)
print("57_65 over Z/46:", verify(catalog("57_65"), z46).status)

# %% [markdown]
# The Z/29 coloring is also a circulant Ramsey coloring: no K4 in class a
# and no triangle in b or c, so R(4,3,3) > 29.

# %%
rep = ramsey_check(z29, {"a": 4, "b": 3, "c": 3})
print("clique-free:", rep.clique_free)

# %% [markdown]
# The same coloring is not a representation of 33_65; the verifier returns
# concrete witnesses y + z = x.

# %%
rep = verify(catalog("33_65"), z29)
print(rep.status, len(rep.violations), "violations, e.g.", rep.violations[0])

# %% [markdown]
# Moving any single element to another class breaks the representation.

# %%
def moved(c, x, target):
    classes = {a: set(xs) - {x} for a, xs in c.classes.items()}
    classes[target].add(x)
    return Coloring(c.group, classes)

still_valid = [
    (x, t) for x in range(1, 29) for t in "abc"
    if x not in z29.classes[t] and verify(catalog("63_65"), moved(z29, x, t)).valid
]
print("mutations that stay valid:", still_valid)
