"""
Elementary curvature-weighted vertex moves.

    I_C(p) = p - C * w(p) * n_p          (inward)
    O_C(p) = p + C * (1 - w(p)) * n_p    (outward)

with w(p) = (K(p) - K_min) / (K_max - K_min). Weights and normals are
evaluated on the input mesh and every vertex moves in one simultaneous pass.
"""

from typing import Optional, Tuple

import numpy as np

from src.core.mesh import EdgeAdjacency, TriMesh
from src.core.settings import Settings
from src.tools.curvature import compute_field, normalized_weights


def weights_and_normals(
    mesh: TriMesh, adj: EdgeAdjacency, settings: Optional[Settings] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """(w, n_p) for every vertex of the current mesh state"""
    field = compute_field(mesh, adj, settings)
    return normalized_weights(field), field.vertex_normals


def step_inward(mesh: TriMesh, adj: EdgeAdjacency, c: float, settings: Optional[Settings] = None) -> TriMesh:
    """
    One inward pass I_C.

    Example:
        p=(0,0,0), n_p=(0,0,1), w=1, C=0.25 -> (0,0,-0.25)
    """
    w, normals = weights_and_normals(mesh, adj, settings)
    return mesh.with_vertices(mesh.vertices - (c * w)[:, None] * normals)


def step_outward(mesh: TriMesh, adj: EdgeAdjacency, c: float, settings: Optional[Settings] = None) -> TriMesh:
    """
    One outward pass O_C.

    Example:
        p=(2,0,0), n_p=(1,0,0), w=0, C=0.25 -> (2.25,0,0)
    """
    w, normals = weights_and_normals(mesh, adj, settings)
    return mesh.with_vertices(mesh.vertices + (c * (1.0 - w))[:, None] * normals)


def step_frozen(
    mesh: TriMesh, adj: EdgeAdjacency, k_in: int, k_out: int, c: float, settings: Optional[Settings] = None
) -> TriMesh:
    """
    k_in inward and k_out outward moves against one field evaluation:
    p + C * n_p * (k_out * (1 - w) - k_in * w)
    """
    w, normals = weights_and_normals(mesh, adj, settings)
    factor = c * (k_out * (1.0 - w) - k_in * w)
    return mesh.with_vertices(mesh.vertices + factor[:, None] * normals)
