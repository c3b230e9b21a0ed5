import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cubiflip.canonical import from_code  # noqa: E402
from cubiflip.models import (annulus_grid, beak_sphere, cube_sphere, disk_grid, grid_torus,  # noqa: E402
                             klein_grid, moebius_strip, pillow_sphere, rp2_min)
from cubiflip.search import code_bytes, layer_codes  # noqa: E402

MODEL_CASES = {
    "cube_sphere": cube_sphere,
    "pillow_sphere": pillow_sphere,
    "beak_sphere": beak_sphere,
    "grid_torus_1_1": lambda: grid_torus(1, 1),
    "grid_torus_1_2": lambda: grid_torus(1, 2),
    "grid_torus_2_2": lambda: grid_torus(2, 2),
    "grid_torus_2_3": lambda: grid_torus(2, 3),
    "klein_grid_1_1": lambda: klein_grid(1, 1),
    "klein_grid_2_2": lambda: klein_grid(2, 2),
    "rp2_min": rp2_min,
    "disk_grid_1_1": lambda: disk_grid(1, 1),
    "disk_grid_2_2": lambda: disk_grid(2, 2),
    "annulus_grid_1_3": lambda: annulus_grid(1, 3),
    "annulus_grid_2_2": lambda: annulus_grid(2, 2),
    "moebius_strip_2": lambda: moebius_strip(2),
    "moebius_strip_3": lambda: moebius_strip(3),
}

# small enumerated complexes per surface: (surface, boundary, max F)
SMALL_LAYERS = [
    ("sphere", None, 4),
    ("projective plane", None, 3),
    ("torus", None, 3),
    ("Klein bottle", None, 2),
    ("disk", "4", 4),
    ("disk", None, 2),
    ("annulus", None, 2),
    ("Moebius strip", None, 2),
]


def enumerated(surface, boundary, max_faces):
    return [from_code(code_bytes(r)) for F in range(1, max_faces + 1)
            for r in layer_codes(surface, F, boundary)]


def small_corpus():
    """Standard models plus every enumerated complex in SMALL_LAYERS, with ids."""
    out = [(name, f()) for name, f in MODEL_CASES.items()]
    for surface, bd, top in SMALL_LAYERS:
        tag = surface.replace(" ", "_") + ("" if bd is None else f"_b{bd}")
        for k, G in enumerate(enumerated(surface, bd, top)):
            out.append((f"{tag}_F{G.n_faces}_{k}", G))
    return out


@pytest.fixture(scope="session")
def corpus():
    return small_corpus()


@pytest.fixture(params=list(MODEL_CASES), scope="module")
def model(request):
    return MODEL_CASES[request.param]()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        status, what, seconds = results[n]
        terminalreporter.write_line(f"criterion {n}: {status} {what} ({seconds:.1f}s)")
