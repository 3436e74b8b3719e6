# %% [markdown]
# # Enumerating small symmetric integral atom structures
#
# Structures are determined by their forbidden diversity cycles.  Up to
# relabeling there are 7 with two diversity atoms and 65 with three.

# %%
from cycrep import enumerate_structures, flexible_atoms, spectrum

two = enumerate_structures(2)
three = enumerate_structures(3)
flex = enumerate_structures(3, flexible_only=True)
print(len(two), len(three), len(flex))

# %%
for s in flex:
    print(s, " flexible:", sorted(flexible_atoms(s)))

# %% [markdown]
# Cyclic spectra of the seven 2-atom structures over Z/2 .. Z/14.  The
# multiset of rows matches the published table of cyclic spectra for the
# algebras 1_7 .. 7_7 (truncated at 14); which label belongs to which
# structure is read off from the spectra, not assumed.

# %%
for s in two:
    res = spectrum(s, 2, 14)
    print(f"{str(s):40s} {res.found}")
