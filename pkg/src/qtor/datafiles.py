"""Access to the bundled example inputs (installed under qtor/data)."""

from __future__ import annotations

import json
from importlib.resources import files

MANIFOLDS = (
    "cp2.json",
    "cp1xcp1.json",
    "hirzebruch_0.json",
    "hirzebruch_1.json",
    "hirzebruch_2.json",
    "hirzebruch_3.json",
    "cp3.json",
    "bott6.json",
)

CONES = (
    "cp2_cone.json",
    "nu_cone.json",
    "threecell_cone.json",
)


def bundled_path(name):
    """Traversable for a bundled data file; str() of it is a real path
    for source and wheel installs alike."""
    return files("qtor").joinpath("data", name)


def load_bundled_manifold(name):
    from .manifold import manifold_from_dict, validate
    obj = json.loads(bundled_path(name).read_text())
    return validate(manifold_from_dict(obj))


def load_bundled_cone(name):
    from .serialize import cone_from_dict
    return cone_from_dict(json.loads(bundled_path(name).read_text()))
