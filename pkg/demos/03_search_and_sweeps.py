# %% [markdown]
# # Backtracking search
#
# The search assigns inverse orbits {x, -x} to atoms in increasing order and
# returns the first valid coloring, re-checked by the verifier.

# %%
import time

from cycrep import SearchConfig, catalog, cyclic_group, search_group, spectrum, symmetric_group

out = search_group(catalog("63_65"), cyclic_group(29))
print(out.result, out.nodes, "nodes")
print({a: sorted(xs) for a, xs in out.coloring.classes.items()})

# %% [markdown]
# 33_65 has no cyclic representation in this range.

# %%
t0 = time.perf_counter()
res = spectrum(catalog("33_65"), 2, 36)
print("found:", res.found, "partial:", res.partial, f"{time.perf_counter() - t0:.1f}s")

# %% [markdown]
# Non-cyclic groups go through the same engine (left-regular reading).
# S_5 is large for this engine, so it runs under a time budget.

# %%
print("S4:", search_group(catalog("33_65"), symmetric_group(4)).result)
print("S5 (5 s budget):", search_group(catalog("33_65"), symmetric_group(5), SearchConfig(time_budget=5)).result)
