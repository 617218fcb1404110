"""Combinatorial input layer: simple-polytope duals plus characteristic data.

A quasitoric manifold of dimension ``2n`` over a simple polytope with
``m`` facets is encoded by the dual simplicial complex (its maximal
faces, each an n-set of facet labels ``1..m``) together with an
``n x m`` integer characteristic matrix whose column ``j`` is the
circle-subgroup data of facet ``j``.

`validate` enforces exactly the conditions later stages rely on:

* purity: every maximal face has n vertices;
* coverage: every facet label occurs in some maximal face;
* no repeated maximal faces;
* local standardness: for every maximal face the n x n minor of the
  characteristic matrix on its columns has determinant +-1;
* sphere-likeness, as the cheap necessary condition that the h-vector
  is symmetric and nonnegative (full sphere recognition is undecidable
  business we do not attempt).

The h-vector doubles as the list of even Betti numbers, so everything
downstream cross-checks against it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import (
    DanglingVertexError,
    NonUnimodularError,
    NotPureError,
    NotSphereLikeError,
    ParseError,
    ValidationError,
)
from .linalg import det_int


@dataclass(frozen=True)
class QuasitoricData:
    """Raw input: facet count, half-dimension, maximal faces, matrix.

    Faces are kept as sorted tuples of 1-based labels, the face list
    itself sorted; ``lam`` has n rows of m integers (one column per
    facet, in facet order).
    """

    m: int
    n: int
    maximal_faces: tuple
    lam: tuple

    @staticmethod
    def make(m, n, maximal_faces, lam):
        faces = tuple(sorted(tuple(sorted(int(v) for v in f)) for f in maximal_faces))
        matrix = tuple(tuple(int(x) for x in row) for row in lam)
        return QuasitoricData(int(m), int(n), faces, matrix)


@dataclass(frozen=True)
class ValidatedManifold:
    data: QuasitoricData
    f_vector: tuple
    h_vector: tuple

    @property
    def m(self):
        return self.data.m

    @property
    def n(self):
        return self.data.n

    @property
    def dim(self):
        return 2 * self.data.n


def _f_vector(m, n, maximal_faces):
    """Counts (f_0, ..., f_{n-1}) of nonempty faces of the complex."""
    faces = set()
    for mf in maximal_faces:
        for size in range(1, n + 1):
            faces.update(combinations(mf, size))
    out = [0] * n
    for f in faces:
        out[len(f) - 1] += 1
    return tuple(out)


def _h_vector(f, n):
    hs = []
    for j in range(n + 1):
        s = 0
        for i in range(j + 1):
            fi = 1 if i == 0 else f[i - 1]
            s += (-1) ** (j - i) * comb(n - i, j - i) * fi
        hs.append(s)
    return tuple(hs)


def validate(data: QuasitoricData) -> ValidatedManifold:
    """Check all input invariants; returns the validated bundle.

    Idempotent: ``validate(v.data)`` reproduces ``v``.
    """
    m, n = data.m, data.n
    if not (m >= n >= 1):
        raise ValidationError("need m >= n >= 1, got m=%d n=%d" % (m, n))
    if len(data.lam) != n or any(len(row) != m for row in data.lam):
        raise ValidationError("characteristic matrix must be %d x %d" % (n, m))
    if not data.maximal_faces:
        raise ValidationError("no maximal faces given")

    seen = set()
    covered = set()
    for face in data.maximal_faces:
        if len(set(face)) != len(face) or len(face) != n:
            raise NotPureError(face, n)
        if any(v < 1 or v > m for v in face):
            raise ValidationError("facet label out of range 1..%d in face %r" % (m, list(face)))
        if face in seen:
            raise ValidationError("maximal face %r repeated" % (list(face),))
        seen.add(face)
        covered.update(face)
    for v in range(1, m + 1):
        if v not in covered:
            raise DanglingVertexError(v)

    for face in data.maximal_faces:
        minor = [[data.lam[r][c - 1] for c in face] for r in range(n)]
        d = det_int(minor)
        if abs(d) != 1:
            raise NonUnimodularError(face, d)

    f = _f_vector(m, n, data.maximal_faces)
    h = _h_vector(f, n)
    if h != tuple(reversed(h)) or any(x < 0 for x in h):
        raise NotSphereLikeError(h)
    # Sum of the h-vector counts the vertices of the polytope.
    assert sum(h) == f[n - 1]
    return ValidatedManifold(data=data, f_vector=f, h_vector=h)


def h_vector(v: ValidatedManifold) -> tuple:
    return v.h_vector


def manifold_from_dict(obj) -> QuasitoricData:
    """Parse the manifold JSON object; field names are fixed."""
    if not isinstance(obj, dict):
        raise ParseError("manifold file must hold a JSON object")
    for key in ("m", "n", "maximal_faces", "lambda"):
        if key not in obj:
            raise ParseError("missing field %r" % key, field=key)
    m, n = obj["m"], obj["n"]
    if not isinstance(m, int) or not isinstance(n, int):
        raise ParseError("fields 'm' and 'n' must be integers", field="m")
    faces = obj["maximal_faces"]
    if (not isinstance(faces, list)
            or not all(isinstance(f, list) and all(isinstance(v, int) for v in f) for f in faces)):
        raise ParseError("'maximal_faces' must be a list of integer lists", field="maximal_faces")
    lam = obj["lambda"]
    if (not isinstance(lam, list)
            or not all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in lam)):
        raise ParseError("'lambda' must be a list of integer rows", field="lambda")
    return QuasitoricData.make(m, n, faces, lam)


def load_manifold(path) -> ValidatedManifold:
    """Parse and validate a manifold JSON file in one step."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError("invalid JSON in %s: %s" % (path, exc)) from exc
    return validate(manifold_from_dict(obj))
