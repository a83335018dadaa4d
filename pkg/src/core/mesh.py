"""
Triangle mesh container, edge adjacency and face geometry.

The surface is a closed, consistently oriented, manifold triangulation
with outward (counter-clockwise seen from outside) winding.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.core.errors import (
    DegenerateFaceError,
    MeshError,
    MeshIndexError,
    NotClosedManifoldError,
    OrientationError,
)
from src.core.settings import Settings, resolve


class TriMesh:
    """
    Immutable triangle mesh.

    vertices - (V, 3) float64 positions
    faces    - (F, 3) int64 vertex indices, outward winding
    """

    __slots__ = ("_vertices", "_faces")

    def __init__(self, vertices, faces):
        v = np.array(vertices, dtype=np.float64)
        f = np.array(faces, dtype=np.int64)
        if v.size == 0:
            v = v.reshape(0, 3)
        if f.size == 0:
            f = f.reshape(0, 3)
        if v.ndim != 2 or v.shape[1] != 3:
            raise MeshError(f"Vertices should have shape (V, 3), got {v.shape}")
        if f.ndim != 2 or f.shape[1] != 3:
            raise MeshError(f"Faces should have shape (F, 3), got {f.shape}")
        if not np.all(np.isfinite(v)):
            bad = int(np.nonzero(~np.all(np.isfinite(v), axis=1))[0][0])
            raise MeshError(f"Vertex {bad} has a non-finite coordinate")
        if f.size:
            if f.min() < 0 or f.max() >= len(v):
                bad = int(np.nonzero((f < 0).any(axis=1) | (f >= len(v)).any(axis=1))[0][0])
                raise MeshIndexError(
                    f"Face {bad} references vertex outside [0, {len(v)}): {f[bad].tolist()}"
                )
            repeated = (f[:, 0] == f[:, 1]) | (f[:, 1] == f[:, 2]) | (f[:, 0] == f[:, 2])
            if repeated.any():
                bad = int(np.nonzero(repeated)[0][0])
                raise MeshError(f"Face {bad} repeats a vertex: {f[bad].tolist()}")
        v.flags.writeable = False
        f.flags.writeable = False
        self._vertices = v
        self._faces = f

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def faces(self) -> np.ndarray:
        return self._faces

    @property
    def n_vertices(self) -> int:
        return len(self._vertices)

    @property
    def n_faces(self) -> int:
        return len(self._faces)

    def with_vertices(self, vertices: np.ndarray) -> "TriMesh":
        """Same topology, new positions"""
        return TriMesh(vertices, self._faces)

    def scaled(self, s: float) -> "TriMesh":
        return self.with_vertices(self._vertices * s)

    def transformed(self, rotation: np.ndarray, translation: Sequence[float] = (0.0, 0.0, 0.0)) -> "TriMesh":
        """Apply p -> R p + t to every vertex"""
        r = np.asarray(rotation, dtype=np.float64)
        return self.with_vertices(self._vertices @ r.T + np.asarray(translation, dtype=np.float64))

    def permuted(self, perm: Sequence[int]) -> "TriMesh":
        """
        Relabel vertices: new vertex i is old vertex perm[i].
        Faces keep their order and cyclic orientation.
        """
        perm = np.asarray(perm, dtype=np.int64)
        inverse = np.empty_like(perm)
        inverse[perm] = np.arange(len(perm))
        return TriMesh(self._vertices[perm], inverse[self._faces])

    def reversed(self) -> "TriMesh":
        """Flip the winding of every face"""
        return TriMesh(self._vertices, self._faces[:, ::-1])

    def bbox_diagonal(self) -> float:
        if self.n_vertices == 0:
            return 0.0
        return float(np.linalg.norm(self._vertices.max(axis=0) - self._vertices.min(axis=0)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriMesh):
            return NotImplemented
        return (
            self._vertices.shape == other._vertices.shape
            and self._faces.shape == other._faces.shape
            and bool(np.array_equal(self._vertices, other._vertices))
            and bool(np.array_equal(self._faces, other._faces))
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"TriMesh(vertices={self.n_vertices}, faces={self.n_faces})"


@dataclass(frozen=True)
class EdgeAdjacency:
    """
    Undirected edge table of a closed oriented mesh.

    edges        - (E, 2) endpoints (u, v), u < v, sorted lexicographically
    edge_faces   - (E, 2) faces (f1, f2); f1 traverses the edge as u -> v
    vertex_edges - (V, D) incident edge indices per vertex, padded with -1
    vertex_faces - (V, Df) incident face indices per vertex, padded with -1
    """
    edges: np.ndarray
    edge_faces: np.ndarray
    vertex_edges: np.ndarray
    vertex_faces: np.ndarray

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_index(self, u: int, v: int) -> int:
        """Index of the undirected edge {u, v}"""
        a, b = (u, v) if u < v else (v, u)
        lo = int(np.searchsorted(self.edges[:, 0], a, side="left"))
        hi = int(np.searchsorted(self.edges[:, 0], a, side="right"))
        pos = lo + int(np.searchsorted(self.edges[lo:hi, 1], b))
        if pos >= hi or self.edges[pos, 1] != b:
            raise KeyError(f"No edge ({a}, {b})")
        return pos


def _padded_incidence(owner: np.ndarray, item: np.ndarray, n_owners: int) -> np.ndarray:
    """Group item ids by owner into a (n_owners, max_count) table padded with -1"""
    order = np.lexsort((item, owner))
    owner = owner[order]
    item = item[order]
    counts = np.bincount(owner, minlength=n_owners)
    width = int(counts.max()) if len(counts) and counts.max() > 0 else 0
    table = np.full((n_owners, width), -1, dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    slot = np.arange(len(owner)) - starts[owner]
    table[owner, slot] = item
    table.flags.writeable = False
    return table


def build_adjacency(mesh: TriMesh) -> EdgeAdjacency:
    """
    Map every undirected edge to its two incident faces.

    Raises NotClosedManifoldError for boundary / non-manifold edges and
    OrientationError when neighbours traverse their shared edge the same way.
    """
    faces = mesh.faces
    n_faces = len(faces)
    if n_faces == 0:
        raise NotClosedManifoldError("Mesh has no faces", edge=(-1, -1))

    # Directed half-edges a->b, b->c, c->a
    tails = faces.reshape(-1)
    heads = np.roll(faces, -1, axis=1).reshape(-1)
    owner = np.repeat(np.arange(n_faces, dtype=np.int64), 3)

    lo = np.minimum(tails, heads)
    hi = np.maximum(tails, heads)
    forward = tails < heads  # traverses the undirected edge as lo -> hi

    order = np.lexsort((~forward, hi, lo))
    lo, hi, forward, owner = lo[order], hi[order], forward[order], owner[order]

    boundaries = np.concatenate(([True], (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])))
    starts = np.nonzero(boundaries)[0]
    counts = np.diff(np.concatenate((starts, [len(lo)])))

    bad = np.nonzero(counts != 2)[0]
    if len(bad):
        k = starts[bad[0]]
        edge = (int(lo[k]), int(hi[k]))
        raise NotClosedManifoldError(
            f"Edge {edge} is shared by {int(counts[bad[0]])} faces (closed manifold needs exactly 2)",
            edge=edge,
        )

    first, second = starts, starts + 1
    # Sorted with forward half-edge first; a consistent pair has exactly one forward
    same_direction = forward[first] == forward[second]
    if same_direction.any():
        k = first[np.nonzero(same_direction)[0][0]]
        edge = (int(lo[k]), int(hi[k]))
        raise OrientationError(
            f"Faces {int(owner[k])} and {int(owner[k + 1])} traverse edge {edge} in the same direction",
            edge=edge,
        )

    edges = np.column_stack((lo[first], hi[first]))
    edge_faces = np.column_stack((owner[first], owner[second]))
    n_edges = len(edges)

    edge_ids = np.arange(n_edges, dtype=np.int64)
    vertex_edges = _padded_incidence(
        np.concatenate((edges[:, 0], edges[:, 1])),
        np.concatenate((edge_ids, edge_ids)),
        mesh.n_vertices,
    )
    face_ids = np.repeat(np.arange(n_faces, dtype=np.int64), 3)
    vertex_faces = _padded_incidence(faces.reshape(-1), face_ids, mesh.n_vertices)

    edges.flags.writeable = False
    edge_faces.flags.writeable = False
    return EdgeAdjacency(
        edges=edges,
        edge_faces=edge_faces,
        vertex_edges=vertex_edges,
        vertex_faces=vertex_faces,
    )


# ============================================================================
# FACE GEOMETRY
# ============================================================================

def dot3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # fixed left-to-right summation order
    return (a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1]) + a[..., 2] * b[..., 2]


def norm3(a: np.ndarray) -> np.ndarray:
    return np.sqrt(dot3(a, a))


def face_cross(mesh: TriMesh, face_ids: Optional[np.ndarray] = None) -> np.ndarray:
    """(b - a) x (c - a) per face; twice the area times the unit normal"""
    faces = mesh.faces if face_ids is None else mesh.faces[face_ids]
    v = mesh.vertices
    a, b, c = v[faces[:, 0]], v[faces[:, 1]], v[faces[:, 2]]
    return np.cross(b - a, c - a)


def face_areas(mesh: TriMesh) -> np.ndarray:
    return 0.5 * norm3(face_cross(mesh))


def signed_volume(mesh: TriMesh) -> float:
    """
    Enclosed volume by the divergence theorem: sum of a . (b x c) / 6.
    Positive for outward winding.
    """
    v = mesh.vertices
    f = mesh.faces
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    return math.fsum(dot3(a, np.cross(b, c))) / 6.0


def degenerate_area_threshold(mesh: TriMesh, settings: Optional[Settings] = None) -> float:
    tol = resolve(settings).tolerances
    return tol.degenerate_area_rel * mesh.bbox_diagonal() ** 2


def face_normals(mesh: TriMesh, settings: Optional[Settings] = None) -> np.ndarray:
    """Unit outward normals of every face"""
    cross = face_cross(mesh)
    norms = norm3(cross)
    threshold = 2.0 * degenerate_area_threshold(mesh, settings)
    bad = np.nonzero(~(norms > threshold))[0]
    if len(bad):
        f = int(bad[0])
        raise DegenerateFaceError(f"Face {f} is degenerate (area {0.5 * norms[f]:.3e})", face=f)
    return cross / norms[:, None]


def face_normal(mesh: TriMesh, f: int, settings: Optional[Settings] = None) -> np.ndarray:
    """
    Unit normal of face f: normalize((b - a) x (c - a)).

    Example:
        >>> m = TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
        >>> face_normal(m, 0)
        array([0., 0., 1.])
    """
    if not 0 <= f < mesh.n_faces:
        raise MeshIndexError(f"Face index {f} out of range [0, {mesh.n_faces})")
    cross = face_cross(mesh, np.array([f]))[0]
    norm = float(norm3(cross))
    if not norm > 2.0 * degenerate_area_threshold(mesh, settings):
        raise DegenerateFaceError(f"Face {f} is degenerate (area {0.5 * norm:.3e})", face=f)
    return cross / norm


def check_degenerate_faces(mesh: TriMesh, settings: Optional[Settings] = None) -> None:
    """Raise DegenerateFaceError for the first face below the area tolerance"""
    if mesh.n_faces == 0:
        return
    areas = face_areas(mesh)
    # Zero area is degenerate even when the threshold collapses to 0
    bad = np.nonzero(~((areas >= degenerate_area_threshold(mesh, settings)) & (areas > 0)))[0]
    if len(bad):
        f = int(bad[0])
        raise DegenerateFaceError(f"Face {f} is degenerate (area {areas[f]:.3e})", face=f)


def validate_closed_mesh(mesh: TriMesh, settings: Optional[Settings] = None) -> EdgeAdjacency:
    """Adjacency of a closed, outward-oriented, non-degenerate mesh (raises otherwise)"""
    adj = build_adjacency(mesh)
    check_degenerate_faces(mesh, settings)
    volume = signed_volume(mesh)
    if not volume > 0:
        raise OrientationError(f"Surface is wound inward (signed volume {volume:.6g})")
    return adj


def euler_characteristic(mesh: TriMesh, adj: EdgeAdjacency) -> int:
    """V - E + F over vertices actually used by faces (2 for a sphere)"""
    used = len(np.unique(mesh.faces))
    return used - adj.n_edges + mesh.n_faces
