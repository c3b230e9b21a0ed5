import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import small_corpus
from oracles import naive_isomorphic, surface_data

from cubiflip import io
from cubiflip.canonical import canonical_code, from_code, is_isomorphic
from cubiflip.gmap import (BoundarySignature, InvalidComplex, QuadGMap, SquareGluing, boundary_signature,
                           cell_counts, classify_surface, from_faces, is_orientable, relabel, validate)
from cubiflip.homology import subdivide
from cubiflip.models import (MODELS, annulus_grid, beak_sphere, cube_sphere, disk_grid, grid_torus,
                             klein_grid, moebius_strip, pillow_sphere, rp2_min, standard_model)

CORPUS = small_corpus()


# name, (V, E, F), euler, orientable, boundary components, surface name
TABLE = [
    (cube_sphere, (8, 12, 6), 2, True, 0, "sphere"),
    (pillow_sphere, (4, 4, 2), 2, True, 0, "sphere"),
    (beak_sphere, (3, 2, 1), 2, True, 0, "sphere"),
    (lambda: grid_torus(1, 1), (1, 2, 1), 0, True, 0, "torus"),
    (lambda: grid_torus(2, 2), (4, 8, 4), 0, True, 0, "torus"),
    (lambda: grid_torus(2, 3), (6, 12, 6), 0, True, 0, "torus"),
    (lambda: klein_grid(2, 2), (4, 8, 4), 0, False, 0, "Klein bottle"),
    (rp2_min, (2, 2, 1), 1, False, 0, "projective plane"),
    (lambda: disk_grid(1, 1), (4, 4, 1), 1, True, 1, "disk"),
    (lambda: disk_grid(2, 2), (9, 12, 4), 1, True, 1, "disk"),
    (lambda: annulus_grid(1, 3), (6, 9, 3), 0, True, 2, "annulus"),
    (lambda: moebius_strip(2), (4, 6, 2), 0, False, 1, "Moebius strip"),
]


@pytest.mark.parametrize("factory, counts, euler, orientable, b, name", TABLE)
def test_model_table(factory, counts, euler, orientable, b, name):
    G = factory()
    assert validate(G).ok
    assert cell_counts(G) == counts
    sc = classify_surface(G)
    assert (sc.euler, sc.orientable, sc.boundary_count, sc.name) == (euler, orientable, b, name)


def test_genus_formula():
    for _, G in CORPUS:
        sc = classify_surface(G)
        if sc.orientable:
            assert sc.euler == 2 - 2 * sc.genus - sc.boundary_count
        else:
            assert sc.euler == 2 - sc.genus - sc.boundary_count


def test_surface_data_matches_oracle():
    for name, G in CORPUS:
        chi, orientable, b, connected = surface_data(G.alpha)
        sc = classify_surface(G)
        assert connected, name
        assert (sc.euler, sc.orientable, sc.boundary_count) == (chi, orientable, b), name
        assert is_orientable(G) == orientable


def test_cube_has_48_darts():
    assert cube_sphere().n_darts == 48


def test_validate_fixed_point_of_a0():
    G = cube_sphere()
    alpha = G.alpha.copy()
    a, b = int(alpha[0, 0]), 0
    alpha[0, a] = a
    alpha[0, b] = b
    report = validate(QuadGMap.from_alpha(alpha))
    assert not report
    assert "a0 not fixed-point-free" in report.violations


def test_validate_hexagonal_face():
    # one hexagon: 12 darts in a single <a0, a1> orbit, all boundary
    n = 12
    d = np.arange(n)
    a0 = d ^ 1
    a1 = np.where(d % 2 == 1, (d + 1) % n, (d - 1) % n)
    report = validate(QuadGMap(a0, a1, d, check=False))
    assert "non-quad face" in report.violations


def test_validate_non_involution():
    G = grid_torus(1, 1)
    alpha = G.alpha.copy()
    alpha[2] = np.roll(alpha[2], 1)
    report = validate(QuadGMap.from_alpha(alpha))
    assert any("a2 not an involution" == v for v in report.violations)


def test_validate_rejects_folded_edge():
    b = SquareGluing(1)
    b.join(0, 1)
    report = validate(b.build(check=False))
    assert any("folded" in v for v in report.violations)


def test_constructor_checks():
    with pytest.raises(InvalidComplex):
        QuadGMap([1, 0], [1, 0], [0, 1])


def test_boundary_signatures():
    assert boundary_signature(disk_grid(1, 1)).edge_counts == (4,)
    assert boundary_signature(disk_grid(2, 2)).edge_counts == (8,)
    assert boundary_signature(cube_sphere()).edge_counts == ()
    assert boundary_signature(annulus_grid(1, 3)).edge_counts == (3, 3)
    assert str(boundary_signature(cube_sphere())) == "none"
    assert BoundarySignature.parse("3,2") == BoundarySignature((2, 3))


def test_boundary_edge_total():
    for name, G in CORPUS:
        sig = boundary_signature(G)
        assert sum(sig.edge_counts) == len(G.boundary_edges), name


def test_subdivision_counts():
    S = subdivide(cube_sphere())
    assert (S.n_spokes, S.n_half_edges, S.n_faces) == (24, 24, 24)
    S = subdivide(grid_torus(1, 1))
    assert (S.n_spokes, S.n_half_edges, S.n_faces) == (4, 4, 4)
    S = subdivide(disk_grid(1, 1))
    assert S.n_spokes == 4 and S.n_half_edges == 8
    assert S.edge_on_boundary[:8].all()


def test_subdivision_preserves_euler_and_boundary():
    for name, G in CORPUS:
        S = subdivide(G)
        V, E, F = G.counts
        assert S.euler() == V - E + F, name
        assert (S.n_faces, S.n_spokes, S.n_half_edges) == (4 * F, 4 * F, 2 * E)


def test_isomorphism_examples():
    assert is_isomorphic(grid_torus(1, 2), grid_torus(2, 1))
    assert not is_isomorphic(cube_sphere(), pillow_sphere())
    assert not is_isomorphic(grid_torus(2, 2), klein_grid(2, 2))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_relabel_invariance(data):
    name, G = data.draw(st.sampled_from(CORPUS))
    perm = data.draw(st.permutations(range(G.n_darts)))
    H = relabel(G, perm)
    assert validate(H).ok
    assert canonical_code(H) == canonical_code(G)
    assert classify_surface(H) == classify_surface(G)
    assert boundary_signature(H) == boundary_signature(G)


def test_code_is_complete_invariant():
    small = [G for _, G in CORPUS if G.n_darts <= 24]
    for G, H in itertools.combinations(small, 2):
        if G.n_darts != H.n_darts:
            continue
        assert (canonical_code(G) == canonical_code(H)) == naive_isomorphic(G.alpha, H.alpha)


def test_from_code_round_trip():
    for name, G in CORPUS:
        H = from_code(canonical_code(G))
        assert validate(H).ok
        assert canonical_code(H) == canonical_code(G), name


def test_qgm_round_trip(tmp_path):
    for name, G in CORPUS:
        H = io.loads(io.dumps(G))
        assert canonical_code(H) == canonical_code(G), name
    path = tmp_path / "t.qgm"
    io.save(grid_torus(2, 2), path)
    assert np.array_equal(io.load(path).alpha, grid_torus(2, 2).alpha)


def test_qgm_comments_and_wrapping():
    G = grid_torus(1, 1)
    text = "# torus\nqgm 1\ndarts 8\na0: 1 0 3 2\n 5 4 7 6  # wrapped\n"
    text += "a1: " + " ".join(map(str, G.a1)) + "\na2: " + " ".join(map(str, G.a2)) + "\n"
    assert np.array_equal(io.loads(text).alpha, G.alpha)


@pytest.mark.parametrize("text, message", [
    ("qgm 2\ndarts 0\n", "header"),
    ("qgm 1\nnodes 8\n", "darts"),
    ("qgm 1\ndarts 8\na0: 1 0\n", "fewer"),
    ("qgm 1\ndarts 1\na0: 0\na1: 0\na2: 0\n7\n", "trailing"),
    ("qgm 1\ndarts 1\na0: 3\na1: 0\na2: 0\n", "range"),
    ("qgm 1\ndarts 1\na0: x\na1: 0\na2: 0\n", "non-integer"),
])
def test_qgm_format_errors(text, message):
    with pytest.raises(io.FormatError, match=message):
        io.loads(text)


def test_qgm_rejects_invalid_map():
    with pytest.raises(InvalidComplex) as ex:
        io.loads("qgm 1\ndarts 2\na0: 1 0\na1: 1 0\na2: 0 1\n")
    assert "dart count not a multiple of 8" in ex.value.report.violations


def test_from_faces_errors():
    with pytest.raises(ValueError):
        from_faces([(0, 1, 2)])
    with pytest.raises(ValueError):
        from_faces([(0, 0, 1, 2)])
    with pytest.raises(ValueError):
        from_faces([(0, 1, 2, 3)] * 3)


def test_standard_models():
    for name in MODELS:
        params = (2, 2) if name in ("grid_torus", "klein_grid", "disk_grid", "annulus_grid") else \
            (2,) if name == "moebius_strip" else ()
        assert validate(standard_model(name, *params)).ok
    with pytest.raises(ValueError):
        standard_model("dodecahedron")
    with pytest.raises(ValueError):
        standard_model("grid_torus", 0, 1)


def test_disconnected_rejected():
    G = grid_torus(1, 1)
    two = np.concatenate([G.alpha, G.alpha + 8], axis=1)
    H = QuadGMap.from_alpha(two)
    with pytest.raises(ValueError):
        classify_surface(H)
    with pytest.raises(ValueError):
        canonical_code(H)
