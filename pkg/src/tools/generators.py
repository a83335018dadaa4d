"""
Procedural test meshes - closed, outward-wound, deterministic for a seed.

Stand-ins for the usual morphing test shapes: cube, capped cylinder,
icosphere, dented (non-convex) sphere and a necked dumbbell.
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../..'))

import math
from typing import Tuple

import numpy as np

from src.core.errors import SpecError
from src.core.mesh import TriMesh, build_adjacency, norm3, validate_closed_mesh
from src.core.types import GeneratorSpec, Shape
from src.tools.curvature import vertex_normals

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

ICOSAHEDRON_VERTICES = np.array([
    [-1, GOLDEN, 0], [1, GOLDEN, 0], [-1, -GOLDEN, 0], [1, -GOLDEN, 0],
    [0, -1, GOLDEN], [0, 1, GOLDEN], [0, -1, -GOLDEN], [0, 1, -GOLDEN],
    [GOLDEN, 0, -1], [GOLDEN, 0, 1], [-GOLDEN, 0, -1], [-GOLDEN, 0, 1],
], dtype=np.float64)

ICOSAHEDRON_FACES = np.array([
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
], dtype=np.int64)

TETRAHEDRON_VERTICES = np.array([
    [1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1],
], dtype=np.float64)

TETRAHEDRON_FACES = np.array([
    [0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2],
], dtype=np.int64)

# Corner index = 4*x + 2*y + z with each bit selecting -0.5 / +0.5
CUBE_VERTICES = np.array([
    [(i >> 2 & 1) - 0.5, (i >> 1 & 1) - 0.5, (i & 1) - 0.5] for i in range(8)
], dtype=np.float64)

# Outward quads (a, b, c, d), split along the a-c diagonal
CUBE_QUADS = [
    (0, 1, 3, 2),  # -x
    (4, 6, 7, 5),  # +x
    (0, 4, 5, 1),  # -y
    (2, 3, 7, 6),  # +y
    (0, 2, 6, 4),  # -z
    (1, 5, 7, 3),  # +z
]


def _unit_rows(v: np.ndarray) -> np.ndarray:
    return v / norm3(v)[:, None]


def subdivide(vertices: np.ndarray, faces: np.ndarray, project: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    One level of 1-to-4 midpoint subdivision (orientation preserving).

    Args:
        project: push new midpoints onto the unit sphere
    """
    pairs = np.stack((faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]), axis=1).reshape(-1, 2)
    unique, inverse = np.unique(np.sort(pairs, axis=1), axis=0, return_inverse=True)
    mids = 0.5 * (vertices[unique[:, 0]] + vertices[unique[:, 1]])
    if project:
        mids = _unit_rows(mids)

    mid = len(vertices) + inverse.reshape(-1, 3)
    a, b, c = faces[:, 0], faces[:, 1], faces[:, 2]
    ab, bc, ca = mid[:, 0], mid[:, 1], mid[:, 2]
    new_faces = np.concatenate((
        np.column_stack((a, ab, ca)),
        np.column_stack((b, bc, ab)),
        np.column_stack((c, ca, bc)),
        np.column_stack((ab, bc, ca)),
    ))
    return np.vstack((vertices, mids)), new_faces


# ============================================================================
# SHAPES
# ============================================================================

def tetrahedron() -> TriMesh:
    """Regular tetrahedron with unit circumradius"""
    return TriMesh(TETRAHEDRON_VERTICES / math.sqrt(3.0), TETRAHEDRON_FACES)


def icosahedron() -> TriMesh:
    """Regular icosahedron with unit circumradius"""
    return TriMesh(_unit_rows(ICOSAHEDRON_VERTICES), ICOSAHEDRON_FACES)


def cube(sub: int = 0) -> TriMesh:
    """Unit cube centred at the origin; 12 triangles at sub=0, faces stay planar"""
    faces = []
    for a, b, c, d in CUBE_QUADS:
        faces.append((a, b, c))
        faces.append((a, c, d))
    vertices, faces = CUBE_VERTICES.copy(), np.array(faces, dtype=np.int64)
    for _ in range(sub):
        vertices, faces = subdivide(vertices, faces)
    return TriMesh(vertices, faces)


def icosphere(sub: int = 3) -> TriMesh:
    """Unit sphere from a subdivided icosahedron: 20 * 4^sub faces"""
    vertices, faces = _unit_rows(ICOSAHEDRON_VERTICES), ICOSAHEDRON_FACES.copy()
    for _ in range(sub):
        vertices, faces = subdivide(vertices, faces, project=True)
    return TriMesh(vertices, faces)


def cylinder(sub: int = 1, aspect: float = 2.0) -> TriMesh:
    """
    Capped cylinder of diameter 1 and height = aspect, axis along z.
    8 * 2^sub segments around, rings spaced to keep quads roughly square.
    """
    radius = 0.5
    height = aspect * 2.0 * radius
    segments = 8 * 2 ** sub
    rings = max(1, int(round(height / (2.0 * math.pi * radius / segments))))

    phi = 2.0 * math.pi * np.arange(segments) / segments
    z = -0.5 * height + height * np.arange(rings + 1) / rings
    ring_xy = np.column_stack((radius * np.cos(phi), radius * np.sin(phi)))

    side = np.column_stack((
        np.tile(ring_xy, (rings + 1, 1)),
        np.repeat(z, segments),
    ))
    bottom_center = len(side)
    top_center = bottom_center + 1
    vertices = np.vstack((side, [[0.0, 0.0, z[0]], [0.0, 0.0, z[-1]]]))

    def vid(k: int, j: int) -> int:
        return k * segments + j % segments

    faces = []
    for k in range(rings):
        for j in range(segments):
            a, b, c, d = vid(k, j), vid(k, j + 1), vid(k + 1, j + 1), vid(k + 1, j)
            faces.append((a, b, c))
            faces.append((a, c, d))
    for j in range(segments):
        faces.append((bottom_center, vid(0, j + 1), vid(0, j)))
        faces.append((top_center, vid(rings, j), vid(rings, j + 1)))

    return TriMesh(vertices, faces)


def dented_sphere(sub: int = 3, depth: float = 0.3, width: float = 0.8) -> TriMesh:
    """
    Icosphere with a smooth radial dent around +z.

    r(alpha) = 1 - depth * (1 + cos(pi * alpha / width)) / 2 for alpha < width,
    alpha the angle from +z. depth=0 reproduces the icosphere exactly.
    """
    base = icosphere(sub)
    u = base.vertices
    alpha = np.arccos(np.clip(u[:, 2], -1.0, 1.0))
    bump = np.where(alpha < width, 0.5 * (1.0 + np.cos(np.pi * alpha / width)), 0.0)
    radius = 1.0 - depth * bump
    return base.with_vertices(u * radius[:, None])


def dumbbell(sub: int = 3, aspect: float = 2.0, neck_radius: float = 0.35, bulb_radius: float = 1.0) -> TriMesh:
    """
    Sphere stretched along x with a pinched waist.

    x is scaled by aspect * bulb_radius; the (y, z) profile is scaled by
    neck_radius at the waist rising to bulb_radius towards the ends.
    """
    if neck_radius >= bulb_radius:
        raise SpecError(f"neck_radius ({neck_radius}) must be smaller than bulb_radius ({bulb_radius})")
    base = icosphere(sub)
    u = base.vertices
    profile = neck_radius + (bulb_radius - neck_radius) * np.sin(0.5 * np.pi * u[:, 0]) ** 2
    v = np.column_stack((
        aspect * bulb_radius * u[:, 0],
        profile * u[:, 1],
        profile * u[:, 2],
    ))
    return base.with_vertices(v)


def jitter(mesh: TriMesh, amplitude: float, seed: int) -> TriMesh:
    """Move each vertex along its normal by U(-1, 1) * amplitude * mean edge length"""
    adj = build_adjacency(mesh)
    v = mesh.vertices
    mean_edge = float(np.mean(norm3(v[adj.edges[:, 1]] - v[adj.edges[:, 0]])))
    rng = np.random.default_rng(seed)
    offsets = rng.uniform(-1.0, 1.0, size=mesh.n_vertices) * amplitude * mean_edge
    return mesh.with_vertices(v + offsets[:, None] * vertex_normals(mesh, adj))


def generate(spec: GeneratorSpec) -> TriMesh:
    """
    Build the mesh described by spec and validate it.

    Raises:
        SpecError: inconsistent shape parameters
    """
    if spec.shape == Shape.CUBE:
        mesh = cube(spec.sub)
    elif spec.shape == Shape.CYLINDER:
        mesh = cylinder(spec.sub, spec.aspect)
    elif spec.shape == Shape.ICOSPHERE:
        mesh = icosphere(spec.sub)
    elif spec.shape == Shape.DENTED_SPHERE:
        mesh = dented_sphere(spec.sub, spec.dent_depth, spec.dent_width)
    elif spec.shape == Shape.DUMBBELL:
        mesh = dumbbell(spec.sub, spec.aspect, spec.neck_radius, spec.bulb_radius)
    elif spec.shape == Shape.TETRAHEDRON:
        mesh = tetrahedron()
    elif spec.shape == Shape.ICOSAHEDRON:
        mesh = icosahedron()
    else:
        raise SpecError(f"Unknown shape: {spec.shape}")

    if spec.noise > 0:
        mesh = jitter(mesh, spec.noise, spec.seed)

    validate_closed_mesh(mesh)
    return mesh


if __name__ == "__main__":
    print(f"{'Shape':<14} {'sub':>4} {'V':>7} {'F':>7}")
    print("=" * 36)
    for shape in Shape:
        for sub in (0, 2):
            m = generate(GeneratorSpec(shape=shape, sub=sub))
            print(f"{shape.value:<14} {sub:>4} {m.n_vertices:>7} {m.n_faces:>7}")
