"""Cones of line transversal directions for disjoint convex bodies in 3-space.

The directions of lines meeting every body of a family form an open subset
of the sphere.  This package computes it on a geodesic mesh, checks that its
components are disks, builds explicit non-transversal paths to the
separating great circles and generates test families.
"""
from .constructions import (CantorSpec, cantor_family, count_clusters, curve_direction,
                            curve_tolerance, hyperbola_point, inflate, probe_direction_curve,
                            random_disjoint_family, ruled_segments)
from .convex import (ConvexBody, DepthResult, Plane3, Poly2, ball_polytope, common_depth,
                     hull2d, orthonormal_basis, project, strict_separator)
from .errors import *  # noqa: F401,F403
from .family import (AMBIGUOUS, NON_TRANSVERSAL, TRANSVERSAL, DirectedLine, Family,
                     GreatCircleSet, HellyWitness, classify_direction, direction_depth,
                     fiber_polygon, geometric_permutation, helly_witness,
                     is_line_transversal, separating_circles, transversal_line)
from .paths import (SpherePath, build_boundary_path, connect_to_separators,
                    refine_to_boundary, validate_path)
from .render import render_sphere_svg
from .scene import (SceneFile, analysis_report, load_scene, parse_scene, scene_from_family,
                    scene_to_family, serialize_scene)
from .sphere import (FAIL, INCONCLUSIVE, PASS, SphereClassification, SphereMesh, build_mesh,
                     classify, components, contractibility_report)

__version__ = "0.1.0"
