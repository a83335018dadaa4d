"""
Convergence scenarios: non-spherical inputs become rounder under the preset,
symmetric inputs keep their symmetry, scale does not change the outcome.
"""

import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np
import pytest

from src.core.mesh import build_adjacency
from src.core.settings import get_settings
from src.core.types import MorphParams, Schedule
from src.morph.engine import MorphEngine, morph_preset, morph_step
from src.morph.transform import weights_and_normals
from src.tools.curvature import edge_lengths
from src.tools.generators import cube, dented_sphere, icosahedron
from src.tools.metrics import compute_metrics, signed_volume, sphericity, surface_area


def _preset_history(mesh, m=3):
    c = get_settings().default_c_rel * mesh.bbox_diagonal()
    records = []
    MorphEngine().run_schedule(
        mesh,
        Schedule.preset(m, c=c, stride=200),
        lambda i, snap: records.append(compute_metrics(snap, i)),
    )
    return records


# k_std / k_mean at iterations 0 and 600 from a reference run (m=3, c_rel=0.001)
CURVATURE_CV_GOLDEN = {
    "cube": (1.8823, 0.0190),
    "dented_sphere": (0.3618, 0.0143),
}


@pytest.mark.parametrize("name,mesh", [
    ("cube", cube(3)),
    ("dented_sphere", dented_sphere(3)),
])
def test_preset_increases_sphericity(name, mesh):
    records = _preset_history(mesh)
    for r in records:
        print(f"  {name} iter={r.iteration:4d} sphericity={r.sphericity:.6f} "
              f"k_cv={r.k_std / r.k_mean:.5f} radius_cv={r.radius_cv:.5f}")

    assert [r.iteration for r in records] == [0, 200, 400, 600]
    s = [r.sphericity for r in records]
    assert all(later > s[0] for later in s[1:])

    cv_start = records[0].k_std / records[0].k_mean
    cv_end = records[-1].k_std / records[-1].k_mean
    assert cv_end < 0.5 * cv_start

    golden_start, golden_end = CURVATURE_CV_GOLDEN[name]
    assert cv_start == pytest.approx(golden_start, abs=5e-4)
    assert cv_end == pytest.approx(golden_end, abs=5e-4)


def test_single_round_rounds_dented_sphere():
    mesh = dented_sphere(3)
    out = morph_preset(mesh, 1, c=get_settings().default_c_rel * mesh.bbox_diagonal())
    before = sphericity(surface_area(mesh), signed_volume(mesh))
    after = sphericity(surface_area(out), signed_volume(out))
    print(f"  dented sphere sphericity {before:.6f} -> {after:.6f}")
    assert after > before


def test_icosahedron_stays_regular():
    mesh = icosahedron()
    engine = MorphEngine()
    out = engine.morph_preset(mesh, 1, c=0.001)
    assert engine.iterations == 200

    radii = np.linalg.norm(out.vertices - out.vertices.mean(axis=0), axis=1)
    lengths = edge_lengths(out, build_adjacency(out))
    assert radii.max() - radii.min() <= 1e-9
    assert lengths.max() - lengths.min() <= 1e-9


def test_scaling_leaves_weights_and_sphericity_unchanged():
    mesh = dented_sphere(2)
    big = mesh.scaled(3.0)
    w, _ = weights_and_normals(mesh, build_adjacency(mesh))
    w_big, _ = weights_and_normals(big, build_adjacency(big))
    assert np.abs(w - w_big).max() <= 1e-9

    params = MorphParams(k_in=2, k_out=1, c=0.002)
    small_out = morph_step(mesh, 20, params)
    big_out = morph_step(big, 20, MorphParams(k_in=2, k_out=1, c=0.006))
    s_small = sphericity(surface_area(small_out), signed_volume(small_out))
    s_big = sphericity(surface_area(big_out), signed_volume(big_out))
    assert abs(s_small - s_big) <= 1e-9
