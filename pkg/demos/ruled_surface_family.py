"""
A family with a Cantor set of transversals
==========================================

Three segments on the lines x = 1, 2, 3 of the saddle z = xy are met
exactly by the lines ell_b = {y = b, z = b x} for b in [1, 2].  A fourth
body, the hull of sample points of the planar curve x (y - 4) = 1 on the
same saddle, keeps only the lines whose parameter is sampled.  Sampling
finite stages of the middle-thirds Cantor set gives 2**k separate pieces.
"""

# %%
import numpy as np

from transversals import (CantorSpec, cantor_family, contractibility_report, count_clusters,
                          curve_tolerance, hyperbola_point, inflate, probe_direction_curve)

print(hyperbola_point(1.0), hyperbola_point(2.0))

# %% [markdown]
# The transversal directions have empty interior, so a mesh cannot see
# them.  Probe the known curve of directions (1, 0, b) instead.

# %%
grid = np.linspace(0.5, 2.5, 2001)
for k, m in [(0, 201), (1, 68), (2, 24), (3, 9)]:
    spec = CantorSpec(k, m)
    f = cantor_family(spec)
    gap = 0.5 * spec.min_gap if k else 0.1
    probe = probe_direction_curve(f, grid)
    print(k, count_clusters(probe, curve_tolerance(f), gap))

# %% [markdown]
# Thickening every body by a small ball turns the curve pieces into open
# sets.  At this scale the transversal set becomes one cap and its antipode.

# %%
thick = inflate(cantor_family(CantorSpec(2, 8)), 0.05)
r = contractibility_report(thick, level=5)
print(r.verdict, r.directed_count, [c.euler_characteristic for c in r.transversal.components])
