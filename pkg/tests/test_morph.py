"""
Tests for the elementary moves, T, Morph-Step, the preset and schedules
"""

import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import math

import numpy as np
import pytest

from src.core.errors import DegenerateNormalError, MorphFailure, ObserverError, OrientationError, SpecError
from src.core.mesh import build_adjacency
from src.core.types import MorphParams, Phase, RefreshMode, Schedule
from src.morph.engine import MorphEngine, morph_preset, morph_step, run_schedule
from src.morph.transform import step_frozen, step_inward, step_outward, weights_and_normals
from src.tools.curvature import compute_field
from src.tools.generators import cube, dented_sphere, icosphere, jitter


def _rotation(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    k = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    return np.eye(3) + math.sin(angle) * k + (1 - math.cos(angle)) * (k @ k)


def _random_meshes(count=20):
    base = icosphere(2)
    return [jitter(base, 0.2, seed) for seed in range(count)]


def test_outward_minus_inward_is_c_times_normal():
    c = 0.25
    for m in [cube(1), dented_sphere(2)] + _random_meshes():
        adj = build_adjacency(m)
        _, normals = weights_and_normals(m, adj)
        diff = step_outward(m, adj, c).vertices - step_inward(m, adj, c).vertices
        err = np.abs(diff - c * normals).max()
        print(f"  max |O - I - C n| = {err:.2e}")
        assert err <= 1e-15


def test_displacement_bounded_by_c():
    c = 0.01
    for m in [dented_sphere(2)] + _random_meshes():
        adj = build_adjacency(m)
        for step in (step_inward, step_outward):
            moved = np.linalg.norm(step(m, adj, c).vertices - m.vertices, axis=1)
            assert moved.max() <= c * (1 + 1e-12)


def test_inward_step_on_cube():
    # Corners 0 and 7 hold K_min (weight 0) and stay put; the others hold K_max
    m = cube()
    adj = build_adjacency(m)
    c = 0.1
    field = compute_field(m, adj)
    out = step_inward(m, adj, c)
    assert np.array_equal(out.vertices[0], m.vertices[0])
    assert np.array_equal(out.vertices[7], m.vertices[7])
    for p in range(1, 7):
        expected = m.vertices[p] - c * field.vertex_normals[p]
        assert np.allclose(out.vertices[p], expected, atol=1e-15)


def test_uniform_field_moves_half_step():
    m = icosphere(0)
    adj = build_adjacency(m)
    c = 0.2
    out = step_inward(m, adj, c)
    moved = np.linalg.norm(out.vertices - m.vertices, axis=1)
    assert np.allclose(moved, 0.1, atol=1e-12)


def test_frozen_single_inward_matches_per_step():
    m = dented_sphere(2)
    adj = build_adjacency(m)
    assert step_frozen(m, adj, 1, 0, 0.05) == step_inward(m, adj, 0.05)


def test_apply_T_step_log():
    engine = MorphEngine()
    engine.apply_T(cube(1), MorphParams(k_in=2, k_out=1, c=0.01))
    assert engine.step_log == ["I", "I", "O"]
    assert engine.iterations == 1

    engine.reset()
    engine.apply_T(cube(1), MorphParams(k_in=0, k_out=2, c=0.01))
    assert engine.step_log == ["O", "O"]


def test_frozen_mode_single_evaluation():
    m = cube(1)
    adj = build_adjacency(m)
    engine = MorphEngine(refresh=RefreshMode.FROZEN_PER_T)
    out = engine.apply_T(m, MorphParams(k_in=2, k_out=1, c=0.01), adj)
    assert engine.step_log == ["T"]
    w, n = weights_and_normals(m, adj)
    expected = m.vertices + (0.01 * (1 * (1 - w) - 2 * w))[:, None] * n
    assert np.array_equal(out.vertices, expected)


def test_morph_step_zero_is_identity():
    m = cube(1)
    params = MorphParams(k_in=2, k_out=2, c=0.01)
    assert morph_step(m, 0, params) is m
    with pytest.raises(SpecError):
        morph_step(m, -1, params)


def test_morph_step_composes():
    m = cube(1)
    params = MorphParams(k_in=2, k_out=1, c=0.01)
    engine = MorphEngine()
    twice = engine.morph_step(engine.morph_step(m, 2, params), 3, params)
    assert twice == morph_step(m, 5, params)
    assert engine.iterations == 5


def test_params_validation():
    with pytest.raises(ValueError):
        MorphParams(k_in=0, k_out=0, c=0.1)
    with pytest.raises(ValueError):
        MorphParams(k_in=1, k_out=1, c=0.0)
    with pytest.raises(ValueError):
        MorphParams(k_in=-1, k_out=2, c=0.1)


def test_preset_counts():
    engine = MorphEngine()
    engine.morph_preset(cube(), 1, c=0.001)
    assert engine.iterations == 200
    assert len(engine.step_log) == 100 * 4 + 100 * 3
    assert engine.step_log[:4] == ["I", "I", "O", "O"]
    assert engine.step_log[-3:] == ["I", "I", "O"]


def test_preset_zero_rounds_identity():
    m = cube()
    assert morph_preset(m, 0) is m


def test_permutation_equivariance_is_exact():
    m = dented_sphere(2)
    perm = np.random.default_rng(7).permutation(m.n_vertices)
    params = MorphParams(k_in=2, k_out=1, c=0.01)
    a = morph_step(m, 3, params)
    b = morph_step(m.permuted(perm), 3, params)
    assert np.array_equal(b.vertices, a.vertices[perm])


def test_rotation_translation_equivariance():
    m = cube(2)
    r = _rotation((1.0, 2.0, 3.0), 0.7)
    t = np.array([0.5, -1.0, 2.0])
    params = MorphParams(k_in=2, k_out=2, c=0.01)
    a = morph_step(m, 5, params).transformed(r, t)
    b = morph_step(m.transformed(r, t), 5, params)
    err = np.abs(a.vertices - b.vertices).max()
    print(f"  rotation error: {err:.2e}")
    assert err <= 1e-9


def test_connectivity_preserved():
    m = cube(1)
    out = morph_preset(m, 1, c=0.001)
    assert np.array_equal(out.faces, m.faces)
    assert out.n_vertices == m.n_vertices


def test_schedule_checkpoints():
    schedule = Schedule.preset(1, c=0.01, stride=50)
    assert schedule.total_iterations == 200
    assert schedule.checkpoints() == [0, 50, 100, 150, 200]
    assert Schedule(phases=[Phase(n=30, params=MorphParams(k_in=1, k_out=1, c=0.1))], stride=20).checkpoints() == [0, 20, 30]


def test_run_schedule_observer_iterations():
    seen = []
    schedule = Schedule.preset(1, c=0.001, stride=50)
    run_schedule(cube(), schedule, lambda i, mesh: seen.append(i))
    assert seen == [0, 50, 100, 150, 200]


def test_run_schedule_matches_preset():
    m = cube()
    final = run_schedule(m, Schedule.preset(1, c=0.001))
    assert final == morph_preset(m, 1, c=0.001)


def test_empty_schedule_observes_start_only():
    m = cube()
    seen = []
    out = run_schedule(m, Schedule(phases=[]), lambda i, mesh: seen.append((i, mesh)))
    assert [i for i, _ in seen] == [0]
    assert seen[0][1] is m
    assert out is m


def test_observer_failure_aborts():
    def observer(i, mesh):
        if i == 20:
            raise IOError("disk full")

    phases = [Phase(n=50, params=MorphParams(k_in=1, k_out=1, c=0.001))]
    with pytest.raises(ObserverError) as info:
        run_schedule(cube(), Schedule(phases=phases, stride=10), observer)
    assert info.value.iteration == 20


def test_numeric_failure_reports_iteration(monkeypatch):
    import src.morph.engine as engine_module

    real_step = engine_module.step_inward
    calls = {"n": 0}

    def pinched_step(mesh, adj, c, settings=None):
        calls["n"] += 1
        if calls["n"] == 2:
            raise DegenerateNormalError("Vertex 0 normal cancels out", vertex=0)
        return real_step(mesh, adj, c, settings)

    monkeypatch.setattr(engine_module, "step_inward", pinched_step)

    phases = [Phase(n=3, params=MorphParams(k_in=1, k_out=0, c=0.001))]
    with pytest.raises(MorphFailure) as info:
        run_schedule(cube(1), Schedule(phases=phases))
    assert info.value.iteration == 2
    assert isinstance(info.value.cause, DegenerateNormalError)


def test_inside_out_input_rejected():
    with pytest.raises(OrientationError):
        run_schedule(cube(1).reversed(), Schedule.preset(1, c=0.001))
    with pytest.raises(OrientationError):
        morph_step(cube(1).reversed(), 1, MorphParams(k_in=1, k_out=1, c=0.001))


def test_step_log_can_be_disabled():
    engine = MorphEngine(keep_log=False)
    engine.morph_step(cube(1), 3, MorphParams(k_in=2, k_out=1, c=0.01))
    assert engine.step_log == []
    assert engine.iterations == 3
