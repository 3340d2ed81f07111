import numpy as np
import pytest

from hessval.polytope import Polytope


def test_square_from_vertices_and_halfspaces_agree():
    sq = Polytope.from_vertices([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5]])
    assert len(sq.vertices) == 4
    hs = Polytope.from_halfspaces(sq.normals, sq.offsets)
    assert hs.volume == pytest.approx(1.0)
    assert sq.volume == pytest.approx(1.0)
    assert sq.interior_radius() == pytest.approx(0.5)


def test_support_and_containment():
    sq = Polytope.box([0, 0], [1, 1])
    assert sq.support(np.array([1.0, -1.0])) == pytest.approx(1.0)
    assert sq.contains(np.array([[0.5, 0.5], [1.5, 0.5]])).tolist() == [
        True, False]


def test_lower_dimensional_sets():
    p = Polytope.point([0.2, 0.3])
    assert not p.is_full_dimensional
    assert p.volume == 0.0
    seg = Polytope.from_vertices([[0, 0], [1, 1]])
    assert not seg.is_full_dimensional
    assert seg.contains(np.array([0.5, 0.5]))


def test_intersection_clip_and_transforms():
    a = Polytope.box([0, 0], [2, 2])
    b = Polytope.box([1, 1], [3, 3])
    assert a.intersect(b).volume == pytest.approx(1.0)
    tri = a.clip(np.array([1.0, 1.0]), 2.0)
    assert tri.volume == pytest.approx(2.0)
    assert a.scaled(0.5).volume == pytest.approx(1.0)
    assert np.allclose(a.translated([1, 0]).bounding_box(), [[1, 3], [0, 2]])


def test_json_round_trip():
    a = Polytope.from_vertices(np.random.default_rng(1).normal(size=(8, 3)))
    b = Polytope.from_dict(a.to_dict())
    assert b.volume == pytest.approx(a.volume)
