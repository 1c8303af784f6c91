"""
Transversal directions of two cubes
===================================

Two cubes of side 2 stacked on the z-axis.  A line meets both iff its
slope relative to the axis is small, so the transversal directions form two
antipodal caps around the poles.
"""

# %%
import numpy as np

from transversals import (Family, ConvexBody, build_mesh, classify, contractibility_report,
                          direction_depth, render_sphere_svg, separating_circles)

corners = np.array(np.meshgrid([-1, 1], [-1, 1], [-1, 1])).reshape(3, -1).T
bottom = ConvexBody(corners + [0, 0, -3], "bottom")
top = ConvexBody(corners + [0, 0, 3], "top")
f = Family([bottom, top])

# %% [markdown]
# The signed depth is the largest common clearance of the two projected
# squares.  Along the axis they coincide (depth 1, the inradius); sideways
# they are 4 apart (depth -2).

# %%
for v in ([0, 0, 1], [1, 0, 0], [0, 1, 4]):
    print(v, round(direction_depth(f, v).depth, 6))

# %% [markdown]
# The only separating circle is the equator.

# %%
print(separating_circles(f).normals)

# %% [markdown]
# Rasterize the sphere and check that every transversal component is a disk.

# %%
report = contractibility_report(f, level=4)
print(report.verdict, report.directed_count, report.undirected_count)
print([c.euler_characteristic for c in report.transversal.components])
print([c.euler_characteristic for c in report.complement.components])

# %%
svg = render_sphere_svg(classify(f, build_mesh(4)), separating_circles(f))
with open("two_cubes.svg", "w") as fh:
    fh.write(svg)
