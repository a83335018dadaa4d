"""
Discrete mean curvature - deterministic tool, no iteration state.

Per edge:    K(e) = l(e) * theta(e), theta the oriented angle between the
             outward normals of the two adjacent faces (convex > 0).
Per vertex:  K(p) = mean of K(e) over incident edges.
Normals:     n_p = normalize(sum of unit normals of incident faces).

Per-vertex reductions add sorted values column by column, so the result does
not depend on vertex labels or face order.
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../..'))

from typing import Optional

import numpy as np
from loguru import logger

from src.core.errors import DegenerateNormalError, MeshIndexError, TopologyError
from src.core.mesh import EdgeAdjacency, TriMesh, dot3, face_normals, norm3
from src.core.settings import Settings, resolve
from src.core.types import CurvatureField, VertexAveraging


def _sorted_row_sum(values: np.ndarray) -> np.ndarray:
    """
    Sum along axis 1 after sorting each row.

    Padding entries must be 0.0; they do not change any partial sum.
    Works on (N, D) and, per component, on (N, D, 3).
    """
    ordered = np.sort(values, axis=1)
    total = np.zeros((values.shape[0],) + values.shape[2:], dtype=np.float64)
    for j in range(ordered.shape[1]):
        total = total + ordered[:, j]
    return total


def _gather(table: np.ndarray, values: np.ndarray) -> np.ndarray:
    """values[table] with -1 padding mapped to zeros"""
    mask = table >= 0
    picked = values[np.where(mask, table, 0)]
    if picked.ndim == 3:
        return np.where(mask[..., None], picked, 0.0)
    return np.where(mask, picked, 0.0)


# ============================================================================
# EDGES
# ============================================================================

def edge_lengths(mesh: TriMesh, adj: EdgeAdjacency, edge_ids: Optional[np.ndarray] = None) -> np.ndarray:
    edges = adj.edges if edge_ids is None else adj.edges[edge_ids]
    v = mesh.vertices
    return norm3(v[edges[:, 1]] - v[edges[:, 0]])


def dihedral_angles(
    mesh: TriMesh,
    adj: EdgeAdjacency,
    normals: Optional[np.ndarray] = None,
    edge_ids: Optional[np.ndarray] = None,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """
    Oriented dihedral angles theta(e) in (-pi, pi].

    theta = atan2((n1 x n2) . e, n1 . n2) with e the unit edge direction as
    traversed by the first face (u -> v). Positive on convex edges.
    """
    if normals is None:
        normals = face_normals(mesh, settings)
    edges = adj.edges if edge_ids is None else adj.edges[edge_ids]
    edge_faces = adj.edge_faces if edge_ids is None else adj.edge_faces[edge_ids]

    n1 = normals[edge_faces[:, 0]]
    n2 = normals[edge_faces[:, 1]]
    v = mesh.vertices
    d = v[edges[:, 1]] - v[edges[:, 0]]
    e_hat = d / norm3(d)[:, None]

    theta = np.arctan2(dot3(np.cross(n1, n2), e_hat), dot3(n1, n2))
    # atan2(-0.0, -1) gives -pi; the range is half-open at -pi
    return np.where(theta <= -np.pi, np.pi, theta)


def dihedral_angle(mesh: TriMesh, adj: EdgeAdjacency, e: int, settings: Optional[Settings] = None) -> float:
    """
    Oriented dihedral angle of edge e.

    Example:
        Adjacent faces of an axis-aligned cube -> pi/2
    """
    if not 0 <= e < adj.n_edges:
        raise MeshIndexError(f"Edge index {e} out of range [0, {adj.n_edges})")
    return float(dihedral_angles(mesh, adj, edge_ids=np.array([e]), settings=settings)[0])


def edge_curvature(l: float, theta: float) -> float:
    """K(e) = l(e) * theta(e)"""
    return l * theta


# ============================================================================
# VERTICES
# ============================================================================

def _average_onto_vertices(
    table: np.ndarray,
    lengths: np.ndarray,
    curvatures: np.ndarray,
    averaging: VertexAveraging,
) -> np.ndarray:
    counts = np.count_nonzero(table >= 0, axis=1)
    isolated = np.nonzero(counts < 3)[0]
    if len(isolated):
        p = int(isolated[0])
        raise TopologyError(f"Vertex {p} has {int(counts[p])} incident edges (need at least 3)", vertex=p)

    if averaging == VertexAveraging.LENGTH_WEIGHTED:
        weighted = _sorted_row_sum(_gather(table, lengths * curvatures))
        return weighted / _sorted_row_sum(_gather(table, lengths))
    return _sorted_row_sum(_gather(table, curvatures)) / counts


def _normals_from_faces(table: np.ndarray, normals: np.ndarray, eps: float, vertex_ids: np.ndarray) -> np.ndarray:
    counts = np.count_nonzero(table >= 0, axis=1)
    lonely = np.nonzero(counts == 0)[0]
    if len(lonely):
        p = int(vertex_ids[lonely[0]])
        raise TopologyError(f"Vertex {p} has no incident faces", vertex=p)

    mean = _sorted_row_sum(_gather(table, normals)) / counts[:, None]
    length = norm3(mean)
    bad = np.nonzero(~(length >= eps))[0]
    if len(bad):
        p = int(vertex_ids[bad[0]])
        raise DegenerateNormalError(
            f"Vertex {p} normal is degenerate (averaged length {length[bad[0]]:.3e})", vertex=p
        )
    return mean / length[:, None]


def vertex_normals(
    mesh: TriMesh,
    adj: EdgeAdjacency,
    normals: Optional[np.ndarray] = None,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """Unit vertex normals for every vertex"""
    settings = resolve(settings)
    if normals is None:
        normals = face_normals(mesh, settings)
    return _normals_from_faces(
        adj.vertex_faces, normals, settings.tolerances.normal_eps, np.arange(mesh.n_vertices)
    )


def vertex_normal(mesh: TriMesh, p: int, settings: Optional[Settings] = None) -> np.ndarray:
    """
    Unit normal at vertex p: averaged unit normals of incident faces, normalized.

    Raises:
        DegenerateNormalError: the averaged vector (nearly) cancels out
    """
    settings = resolve(settings)
    if not 0 <= p < mesh.n_vertices:
        raise MeshIndexError(f"Vertex index {p} out of range [0, {mesh.n_vertices})")
    incident = np.nonzero((mesh.faces == p).any(axis=1))[0]
    if len(incident) == 0:
        raise TopologyError(f"Vertex {p} has no incident faces", vertex=p)
    sub = TriMesh(mesh.vertices, mesh.faces[incident])
    normals = face_normals(sub, settings)
    # Degeneracy relative to the full mesh scale, as in face_normals on the full mesh
    table = np.arange(len(incident))[None, :]
    return _normals_from_faces(table, normals, settings.tolerances.normal_eps, np.array([p]))[0]


def vertex_curvatures(
    mesh: TriMesh,
    adj: EdgeAdjacency,
    lengths: np.ndarray,
    curvatures: np.ndarray,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """K(p) for all vertices from precomputed l(e) and K(e)"""
    settings = resolve(settings)
    return _average_onto_vertices(adj.vertex_edges, lengths, curvatures, settings.vertex_averaging)


def vertex_curvature(mesh: TriMesh, adj: EdgeAdjacency, p: int, settings: Optional[Settings] = None) -> float:
    """
    K(p): mean of K(e) over edges incident to p.

    Raises:
        TopologyError: fewer than 3 incident edges
    """
    settings = resolve(settings)
    if not 0 <= p < mesh.n_vertices:
        raise MeshIndexError(f"Vertex index {p} out of range [0, {mesh.n_vertices})")
    row = adj.vertex_edges[p]
    incident = row[row >= 0]
    if len(incident) < 3:
        raise TopologyError(f"Vertex {p} has {len(incident)} incident edges (need at least 3)", vertex=p)

    lengths = edge_lengths(mesh, adj, incident)
    thetas = dihedral_angles(mesh, adj, edge_ids=incident, settings=settings)
    table = np.arange(len(incident))[None, :]
    return float(
        _average_onto_vertices(table, lengths, lengths * thetas, settings.vertex_averaging)[0]
    )


# ============================================================================
# FIELD
# ============================================================================

def compute_field(mesh: TriMesh, adj: EdgeAdjacency, settings: Optional[Settings] = None) -> CurvatureField:
    """
    Full curvature field of one mesh state.

    Args:
        mesh: closed oriented mesh
        adj: its adjacency (from build_adjacency)

    Returns:
        CurvatureField with per-edge, per-vertex values and the extrema
    """
    settings = resolve(settings)
    normals = face_normals(mesh, settings)

    lengths = edge_lengths(mesh, adj)
    thetas = dihedral_angles(mesh, adj, normals=normals)
    curvatures = lengths * thetas

    k_vertex = vertex_curvatures(mesh, adj, lengths, curvatures, settings)
    n_vertex = vertex_normals(mesh, adj, normals=normals, settings=settings)

    k_min = float(k_vertex.min())
    k_max = float(k_vertex.max())
    uniform = (k_max - k_min) < settings.tolerances.uniform_rel * max(abs(k_max), 1.0)
    if uniform:
        logger.debug(f"Uniform curvature field (K in [{k_min:.6g}, {k_max:.6g}])")

    for arr in (lengths, thetas, curvatures, k_vertex, n_vertex):
        arr.flags.writeable = False

    return CurvatureField(
        edge_lengths=lengths,
        dihedral_angles=thetas,
        edge_curvatures=curvatures,
        vertex_normals=n_vertex,
        vertex_curvatures=k_vertex,
        k_min=k_min,
        k_max=k_max,
        uniform=uniform,
    )


def normalized_weights(field: CurvatureField) -> np.ndarray:
    """w(p) = (K(p) - K_min) / (K_max - K_min); 0.5 everywhere on a uniform field"""
    if field.uniform:
        return np.full(len(field.vertex_curvatures), 0.5)
    return (field.vertex_curvatures - field.k_min) / (field.k_max - field.k_min)


def normalized_weight(field: CurvatureField, p: int) -> float:
    """Weight of one vertex, in [0, 1]"""
    return float(normalized_weights(field)[p])


if __name__ == "__main__":
    from src.tools.generators import generate
    from src.core.mesh import build_adjacency
    from src.core.types import GeneratorSpec, Shape

    for shape in (Shape.TETRAHEDRON, Shape.CUBE, Shape.ICOSAHEDRON):
        mesh = generate(GeneratorSpec(shape=shape))
        field = compute_field(mesh, build_adjacency(mesh))
        print(f"{shape.value:<12} theta in [{field.dihedral_angles.min():.6f}, "
              f"{field.dihedral_angles.max():.6f}]  K_min={field.k_min:.6f}  K_max={field.k_max:.6f}")
