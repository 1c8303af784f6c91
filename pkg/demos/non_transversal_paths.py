"""
Paths of non-transversal directions
===================================

From any direction that is not transversal there is a path of
non-transversal directions to a separating great circle.  Near the boundary
of the transversal cone the path is built from a small certificate: two
bodies whose projections are separated, or three whose projections touch at
one point.
"""

# %%
import numpy as np

from transversals import (Family, ConvexBody, ball_polytope, build_boundary_path,
                          connect_to_separators, direction_depth, refine_to_boundary,
                          render_sphere_svg, separating_circles)

# %% [markdown]
# Two balls of radius 1 at distance 4 along y.  Their projections touch when
# the direction makes a 60 degree angle with the z-axis.

# %%
balls = Family([ball_polytope((0, -2, 0), 1.0, 200), ball_polytope((0, 2, 0), 1.0, 200)])
b = refine_to_boundary(balls, [0, 0, 1], [0, 1, 0])
print("boundary direction", b.round(4), "ideal", np.round([0, np.sqrt(3) / 2, 0.5], 4))

# %%
path = build_boundary_path(balls, b)
print(path.case_tag, path.witness.indices, len(path), path.end.round(4))
print("largest depth along the path", balls.depths(path.samples)[1:].max())

# %% [markdown]
# Three slabs whose projections along z pairwise overlap but meet only at
# the origin.  Here a pair is not enough and the path follows the support
# line of the third body.

# %%
def prism(poly, z0, z1):
    p = np.asarray(poly, dtype=float)
    return ConvexBody(np.vstack([np.column_stack([p, np.full(len(p), z)]) for z in (z0, z1)]))


slabs = Family([
    prism([(0, 0), (2, -1), (2, 2), (-1, 2)], 2, 3),
    prism([(0, 0), (-2, -1), (-2, 2), (1, 2)], 4, 5),
    prism([(-2, -1), (2, -1), (2, 0), (-2, 0)], 0, 1),
])
print(direction_depth(slabs, [0, 0, 1]).depth)
p3 = build_boundary_path(slabs, [0, 0, 1])
print(p3.case_tag, p3.stop_angle, p3.end.round(6))

# %% [markdown]
# From a generic start the path first marches along a geodesic towards the
# nearest separating circle.

# %%
x = np.array([0.0, np.sin(np.radians(10)), np.cos(np.radians(10))])
march = connect_to_separators(balls, x)
print(march.case_tag, len(march), np.abs(separating_circles(balls).normals @ march.end).min())

# %%
with open("ball_path.svg", "w") as fh:
    fh.write(render_sphere_svg(circles=separating_circles(balls), path=path))
