import json
import pathlib

import pytest

from qtor.cohomology import cohomology
from qtor.datafiles import bundled_path
from qtor.manifold import manifold_from_dict, validate

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

BUNDLED = ["cp2", "cp1xcp1", "hirzebruch_0", "hirzebruch_1", "hirzebruch_2",
           "hirzebruch_3", "cp3", "bott6"]


def load(name):
    """Validated bundled manifold by short name."""
    obj = json.loads(bundled_path(name + ".json").read_text())
    return validate(manifold_from_dict(obj))


@pytest.fixture(scope="session")
def rings():
    """Cohomology of every bundled manifold, computed once."""
    return {name: cohomology(load(name)) for name in BUNDLED}


@pytest.fixture(scope="session")
def manifolds():
    return {name: load(name) for name in BUNDLED}


def cp1_power(k):
    """Product of k projective lines: a 2k-dimensional cube example."""
    faces = []
    for bits in range(1 << k):
        faces.append(sorted((i + 1) + k * ((bits >> i) & 1) for i in range(k)))
    lam = [[0] * (2 * k) for _ in range(k)]
    for i in range(k):
        lam[i][i] = 1
        lam[i][i + k] = -1
    return validate(manifold_from_dict(
        {"m": 2 * k, "n": k, "maximal_faces": faces, "lambda": lam}))


@pytest.fixture(scope="session")
def m12():
    """12-dimensional product manifold, shared by the large-input checks."""
    return cp1_power(6)


@pytest.fixture(scope="session")
def ring12(m12):
    return cohomology(m12)
