"""Chopping exterior powers of the natural Sp10(2) module.

Shows the composition factors, the certificate behind each irreducible
factor, and how a single factor is pulled out by dimension.
"""

import time

from unipsep.meataxe import chop, find_factor_of_dim
from unipsep.modules import exterior_power
from unipsep.presets import load_preset

nat = load_preset("sp10").rep

# %% Composition factors of ext^k(V)
for k in range(1, 6):
    t0 = time.perf_counter()
    res = chop(exterior_power(nat, k), rng_state=k)
    parts = " + ".join(f"{d}" if m == 1 else f"{m}x{d}" for d, m in res.dims())
    print(f"ext^{k}: dim {res.dim:3} = {parts}   ({time.perf_counter() - t0:.2f} s)")

# %% Each irreducible factor carries a replayable certificate
res = chop(exterior_power(nat, 3), rng_state=0)
for (r, m), cert in zip(res.factors, res.certificates):
    if r.dim == 1:
        continue
    print(f"dim {r.dim}: theta = {cert.element.describe(r.names)}")
    print(f"    factor {cert.poly} with nullity {cert.nullity}; verifies: {cert.verify(r)}")

# %% Pull out the unique 100-dimensional factor directly
l3 = find_factor_of_dim(exterior_power(nat, 3), 100, rng_state=0)
print("L(00100) has dimension", l3.dim)
