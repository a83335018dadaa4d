"""
Shape metrics - how close a closed mesh is to a round sphere.
Pure functions; sums use math.fsum so results are reproducible.
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../..'))

import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from src.core.errors import MeshError, OrientationError
from src.core.mesh import EdgeAdjacency, TriMesh, build_adjacency, face_areas, norm3, signed_volume
from src.core.settings import Settings
from src.core.types import CurvatureField, MetricsRecord, Point3
from src.tools.curvature import compute_field


def surface_area(mesh: TriMesh) -> float:
    """Sum of triangle areas 1/2 |(b - a) x (c - a)|"""
    return math.fsum(face_areas(mesh))


def sphericity(area: float, volume: float) -> float:
    """
    Isoperimetric sphericity (36 pi V^2 / A^3)^(1/3); 1 for a round sphere.

    Example:
        sphericity(6.0, 1.0) == (pi / 6) ** (1 / 3), about 0.806 (unit cube)
    """
    if not area > 0:
        raise MeshError(f"Area must be positive, got {area}")
    if not volume > 0:
        raise OrientationError(f"Volume must be positive (outward orientation), got {volume}")
    return float(np.cbrt(36.0 * math.pi * volume * volume / area ** 3))


def radius_stats(mesh: TriMesh) -> Tuple[Point3, float, float]:
    """
    Distances of vertices to their plain average.

    Returns:
        (centroid, radius_mean, radius_cv) with cv = population std / mean
    """
    if mesh.n_vertices == 0:
        raise MeshError("Mesh has no vertices")
    v = mesh.vertices
    n = len(v)
    centroid = np.array([math.fsum(v[:, k]) / n for k in range(3)])
    radii = norm3(v - centroid)
    mean = math.fsum(radii) / n
    std = math.sqrt(math.fsum((radii - mean) ** 2) / n)
    cv = std / mean if mean > 0 else 0.0
    return (float(centroid[0]), float(centroid[1]), float(centroid[2])), mean, cv


def curvature_stats(field: CurvatureField) -> Tuple[float, float, float, float]:
    """(k_min, k_max, k_mean, k_std) over vertex curvatures, population std"""
    k = field.vertex_curvatures
    n = len(k)
    mean = math.fsum(k) / n
    std = math.sqrt(math.fsum((k - mean) ** 2) / n)
    return field.k_min, field.k_max, mean, std


def compute_metrics(
    mesh: TriMesh,
    iteration: int = 0,
    adj: Optional[EdgeAdjacency] = None,
    settings: Optional[Settings] = None,
) -> MetricsRecord:
    """
    All diagnostics of one mesh state.

    Sphericity is NaN once the surface has turned inside out (volume <= 0);
    the other columns are still filled in.
    """
    if adj is None:
        adj = build_adjacency(mesh)
    area = surface_area(mesh)
    volume = signed_volume(mesh)
    if volume > 0:
        roundness = sphericity(area, volume)
    else:
        roundness = math.nan
        logger.warning(f"Iteration {iteration}: signed volume {volume:.6g} is not positive, sphericity set to NaN")
    centroid, radius_mean, radius_cv = radius_stats(mesh)
    k_min, k_max, k_mean, k_std = curvature_stats(compute_field(mesh, adj, settings))

    return MetricsRecord(
        iteration=iteration,
        area=area,
        volume=volume,
        sphericity=roundness,
        centroid=centroid,
        radius_mean=radius_mean,
        radius_cv=radius_cv,
        k_min=k_min,
        k_max=k_max,
        k_mean=k_mean,
        k_std=k_std,
    )


if __name__ == "__main__":
    from src.tools.generators import generate
    from src.core.types import GeneratorSpec, Shape

    print(f"{'Shape':<14} {'Area':>10} {'Volume':>10} {'Sphericity':>11} {'radius_cv':>10}")
    print("=" * 60)
    for spec in (
        GeneratorSpec(shape=Shape.CUBE),
        GeneratorSpec(shape=Shape.CYLINDER, sub=2, aspect=3.0),
        GeneratorSpec(shape=Shape.ICOSPHERE, sub=4),
        GeneratorSpec(shape=Shape.DENTED_SPHERE, sub=3),
    ):
        r = compute_metrics(generate(spec))
        print(f"{spec.shape.value:<14} {r.area:>10.4f} {r.volume:>10.4f} {r.sphericity:>11.6f} {r.radius_cv:>10.4f}")
