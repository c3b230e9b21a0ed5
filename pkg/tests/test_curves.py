import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import enumerated, small_corpus

from cubiflip.canonical import is_isomorphic
from cubiflip.curves import (Arrangement, arrangement_dot, arrangement_from_curves, arrangement_surface,
                             double_points, dual_cubication, extract_curves, is_admissible, standardize)
from cubiflip.gmap import QuadGMap, classify_surface, relabel, validate
from cubiflip.models import (annulus_grid, beak_sphere, cube_sphere, disk_grid, grid_torus, klein_grid,
                             moebius_strip, pillow_sphere)

CORPUS = small_corpus()


def test_cube_three_equators():
    cs = extract_curves(cube_sphere())
    assert [c.kind for c in cs.components] == ["circle"] * 3
    assert [len(c) for c in cs.components] == [4, 4, 4]
    assert cs.double_point_count == 6
    assert double_points(cs) == 6


def test_small_examples():
    cs = extract_curves(grid_torus(1, 1))
    assert len(cs.circles) == 2 and cs.double_point_count == 1
    cs = extract_curves(disk_grid(1, 1))
    assert len(cs.intervals) == 2 and not cs.circles and cs.double_point_count == 1
    cs = extract_curves(pillow_sphere())
    assert [len(c) for c in cs.circles] == [2, 2] and cs.double_point_count == 2


def test_report_lines():
    assert extract_curves(cube_sphere()).lines() == ["circle len=4"] * 3 + ["double_points=6"]
    assert str(extract_curves(disk_grid(1, 2))).splitlines()[-1] == "double_points=2"


def test_every_square_crossed_twice():
    for name, G in CORPUS:
        cs = extract_curves(G)
        seen = np.zeros((G.n_faces, 2), dtype=int)
        for c in cs.components:
            for s in c.steps:
                seen[s.face, s.axis] += 1
        assert (seen == 1).all(), name
        assert cs.double_point_count == G.n_faces, name


def test_intervals_match_boundary_edges():
    for name, G in CORPUS:
        cs = extract_curves(G)
        assert 2 * len(cs.intervals) == len(G.boundary_edges), name
        if not len(G.boundary_darts):
            assert not cs.intervals


def test_extracted_arrangements_are_admissible():
    for name, G in CORPUS:
        A = extract_curves(G).arrangement
        assert is_admissible(A), name
        assert A.endpoints() == len(G.boundary_edges)


def test_dual_round_trip_on_corpus():
    # includes surfaces with boundary: arc ends become boundary edges
    for name, G in CORPUS:
        H = dual_cubication(extract_curves(G))
        assert validate(H).ok, name
        assert is_isomorphic(G, H), name
        assert classify_surface(H) == classify_surface(G)


@pytest.mark.parametrize("factory", [cube_sphere, lambda: grid_torus(2, 2), lambda: klein_grid(2, 3),
                                     lambda: annulus_grid(2, 3), lambda: moebius_strip(3)])
def test_dual_examples(factory):
    G = factory()
    assert is_isomorphic(dual_cubication(extract_curves(G)), G)
    assert arrangement_surface(extract_curves(G).arrangement) == classify_surface(G)


def test_one_vertex_sphere_arrangement():
    # the only one-vertex arrangement on the sphere: two loops at a point,
    # each bounding a monogon, with the outer region a disk
    A = extract_curves(beak_sphere()).arrangement
    assert double_points(A) == 1
    H = dual_cubication(A)
    assert H.n_faces == 1 and classify_surface(H).name == "sphere"


def test_rebuilt_from_traversal_alone():
    for name, G in CORPUS[:40]:
        cs = extract_curves(G)
        A = arrangement_from_curves(cs.components, cs.double_point_count)
        assert np.array_equal(A.beta, cs.arrangement.beta)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_curves_relabel_invariant(data):
    name, G = data.draw(st.sampled_from(CORPUS))
    H = relabel(G, data.draw(st.permutations(range(G.n_darts))))
    a, b = extract_curves(G), extract_curves(H)
    assert sorted(a.lines()) == sorted(b.lines())
    assert is_isomorphic(dual_cubication(b), G)


def test_standardize_layout():
    G = relabel(grid_torus(2, 2), np.random.default_rng(0).permutation(32))
    H, old_of_new = standardize(G)
    assert is_isomorphic(G, H)
    for q in range(H.n_faces):
        assert H.face_cycle(8 * q) == list(range(8 * q, 8 * q + 8))
    assert sorted(old_of_new) == list(range(32))


def test_non_admissible_inputs():
    assert double_points(Arrangement.empty()) == 0
    assert not is_admissible(Arrangement.empty())
    # two disjoint embedded circles on the sphere carry no double point
    assert not is_admissible(Arrangement.empty(free_circles=2))
    with pytest.raises(ValueError):
        dual_cubication(Arrangement.empty(free_circles=2))
    # two disjoint arrangements side by side: image not connected
    A = extract_curves(cube_sphere()).arrangement
    b = np.concatenate([A.beta, A.beta + A.n_darts], axis=1)
    two = Arrangement(*b)
    assert double_points(two) == 12 and not is_admissible(two)
    with pytest.raises(ValueError):
        dual_cubication(two)


def test_arrangement_rejects_bad_maps():
    with pytest.raises(ValueError):
        Arrangement([1, 0], [0, 1], [1, 0])
    d = np.arange(6)
    with pytest.raises(ValueError):
        Arrangement(d, d ^ 1, d ^ 1)


def test_arrangement_dot():
    text = arrangement_dot(extract_curves(disk_grid(1, 1)))
    assert text.startswith("graph arrangement {")
    assert text.count("shape=box") == 4
    assert text.count(" -- ") == 4
    text = arrangement_dot(extract_curves(cube_sphere()))
    assert text.count("shape=point") == 6 and text.count(" -- ") == 12


@pytest.mark.parametrize("surface", ["sphere", "projective plane", "torus", "Klein bottle"])
def test_closed_round_trip_small(surface):
    for G in enumerated(surface, None, 3):
        assert is_isomorphic(dual_cubication(extract_curves(G)), G)


def test_dual_of_swapped_involutions():
    G = cube_sphere()
    A = extract_curves(G).arrangement
    b0, b1, b2 = A.beta
    assert np.array_equal(dual_cubication(A).alpha, QuadGMap(b2, b1, b0).alpha)
