"""
Tests for the procedural test meshes
"""

import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np
import pytest

from src.core.errors import SpecError
from src.core.mesh import build_adjacency, euler_characteristic
from src.core.types import GeneratorSpec, Shape
from src.tools.generators import (
    cube, cylinder, dented_sphere, dumbbell, generate, icosahedron, icosphere, jitter, tetrahedron,
)
from src.tools.metrics import signed_volume


@pytest.mark.parametrize("shape", list(Shape))
def test_every_shape_is_closed_sphere_topology(shape):
    m = generate(GeneratorSpec(shape=shape, sub=1))
    adj = build_adjacency(m)
    print(f"  {shape.value}: V={m.n_vertices} F={m.n_faces}")
    assert euler_characteristic(m, adj) == 2
    assert signed_volume(m) > 0


def test_counts():
    assert (cube().n_vertices, cube().n_faces) == (8, 12)
    assert cube(3).n_faces == 12 * 4 ** 3
    assert (icosphere(3).n_vertices, icosphere(3).n_faces) == (642, 1280)
    assert (tetrahedron().n_vertices, tetrahedron().n_faces) == (4, 4)
    assert (icosahedron().n_vertices, icosahedron().n_faces) == (12, 20)


def test_cube_subdivision_keeps_faces_planar():
    v = cube(2).vertices
    assert np.all(np.isclose(np.abs(v).max(axis=1), 0.5))


def test_dent_depth_zero_is_icosphere():
    assert dented_sphere(2, depth=0.0) == icosphere(2)


def test_dent_moves_only_the_cap():
    m = dented_sphere(3, depth=0.3, width=0.8)
    r = np.linalg.norm(m.vertices, axis=1)
    assert r.min() == pytest.approx(0.7, abs=1e-12)
    below = m.vertices[:, 2] < 0
    assert np.allclose(r[below], 1.0, atol=1e-12)


def test_cylinder_dimensions():
    m = cylinder(1, aspect=3.0)
    v = m.vertices
    assert v[:, 2].max() - v[:, 2].min() == pytest.approx(3.0)
    assert np.hypot(v[:, 0], v[:, 1]).max() == pytest.approx(0.5)


def test_dumbbell_is_necked():
    m = dumbbell(3)
    v = m.vertices
    waist = np.abs(v[:, 0]) < 0.05
    ends = np.abs(v[:, 0]) > 0.5 * np.abs(v[:, 0]).max()
    assert np.hypot(v[waist, 1], v[waist, 2]).max() < np.hypot(v[ends, 1], v[ends, 2]).max()
    with pytest.raises(SpecError):
        dumbbell(2, neck_radius=1.0, bulb_radius=0.5)


def test_jitter_is_seeded():
    m = icosphere(2)
    a = jitter(m, 0.1, seed=3)
    b = jitter(m, 0.1, seed=3)
    c = jitter(m, 0.1, seed=4)
    assert a == b
    assert a != c
    assert np.array_equal(a.faces, m.faces)


def test_generator_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec(shape=Shape.CUBE, sub=-1)
    with pytest.raises(ValueError):
        GeneratorSpec(shape="pyramid")
