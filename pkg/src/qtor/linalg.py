"""Exact integer and rational linear algebra.

Everything in this module is exact: integers, ``fractions.Fraction``,
row Hermite normal forms, and finitely generated subgroups of Q^n
(`Lattice` below; rational coordinates are allowed, so these model
Chern-character images and not just subgroups of Z^n).  No floating
point anywhere.

Canonical form conventions, used throughout the package:

* row HNF is the row-style echelon form with leftmost pivots first,
  every pivot positive, and every entry above a pivot reduced into
  ``[0, pivot)``;
* a `Lattice` is stored as a positive integer ``scale`` and an integer
  basis matrix ``rows`` in canonical HNF, with the content of
  ``(scale, rows)`` divided out, so equal subgroups of Q^n compare equal
  as plain tuples.

>>> from fractions import Fraction as F
>>> L = Lattice.from_rows(2, [[F(1), F(1, 2)], [F(0), F(1)]])
>>> L.fraction_rows()
((Fraction(1, 1), Fraction(1, 2)), (Fraction(0, 1), Fraction(1, 1)))
>>> L.member([F(2), F(1)]), L.member([F(1), F(0)])
(True, False)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import DimensionMismatchError


def _first_nonzero(row):
    for i, x in enumerate(row):
        if x:
            return i
    return None


def integer_hnf(rows, width):
    """Canonical row HNF of an integer matrix; zero rows are dropped."""
    h, _, _ = hnf_with_transform(rows, width)
    return tuple(tuple(row) for row in h)


def hnf_with_transform(rows, width):
    """Row HNF with a unimodular bookkeeping transform.

    Returns ``(hnf, transform, kernel)`` where ``hnf`` holds the nonzero
    canonical rows, ``transform[r] @ rows == hnf[r]``, and the ``kernel``
    rows span ``{z in Z^len(rows) : z @ rows == 0}``.  Pivot selection is
    least absolute value, then least row index, so the output (transform
    included) is deterministic.
    """
    a = [list(map(int, r)) for r in rows]
    nrows = len(a)
    for r in a:
        if len(r) != width:
            raise DimensionMismatchError("row width %d != %d" % (len(r), width))
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    r = 0
    for c in range(width):
        while True:
            piv = None
            for i in range(r, nrows):
                if a[i][c] != 0 and (piv is None or abs(a[i][c]) < abs(a[piv][c])):
                    piv = i
            if piv is None:
                break
            if piv != r:
                a[r], a[piv] = a[piv], a[r]
                u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, nrows):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < nrows and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            r += 1
    hnf = [tuple(row) for row in a[:r]]
    transform = [tuple(row) for row in u[:r]]
    kernel = [tuple(row) for row in u[r:]]
    return hnf, transform, kernel


def det_int(m):
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    for row in a:
        if len(row) != n:
            raise DimensionMismatchError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m):
    return abs(det_int(m)) == 1


def int_inverse_unimodular(m):
    """Inverse of an integer matrix with determinant +-1 (again integral)."""
    n = len(m)
    d = det_int(m)
    if abs(d) != 1:
        raise DimensionMismatchError("matrix is not invertible over the integers: det %d" % d)
    # Gauss-Jordan over Q; entries of the result are integers because det = +-1.
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c])
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = []
    for i in range(n):
        row = a[i][n:]
        assert all(x.denominator == 1 for x in row)
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def mat_mul(a, b):
    """Product of two matrices given as sequences of rows."""
    if not a:
        return ()
    inner = len(a[0])
    if inner != len(b):
        raise DimensionMismatchError("inner dimensions %d != %d" % (inner, len(b)))
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(ra[k] * b[k][j] for k in range(inner)) for j in range(cols))
        for ra in a
    )


def row_times_matrix(row, m):
    if len(row) != len(m):
        raise DimensionMismatchError("row length %d != %d rows" % (len(row), len(m)))
    cols = len(m[0]) if m else 0
    return tuple(sum(row[k] * m[k][j] for k in range(len(row))) for j in range(cols))


@dataclass(frozen=True)
class Lattice:
    """Finitely generated subgroup of Q^ambient in canonical form.

    ``rows / scale`` is the canonical basis; two lattices are equal as
    subgroups iff they are equal as dataclasses.
    """

    ambient: int
    scale: int
    rows: tuple

    @staticmethod
    def from_rows(ambient, rows):
        """Canonicalize a generating set of rational rows (spanning the
        same subgroup under integer combinations)."""
        fr = []
        for r in rows:
            r = tuple(Fraction(x) for x in r)
            if len(r) != ambient:
                raise DimensionMismatchError(
                    "generator has %d coordinates in ambient %d" % (len(r), ambient))
            fr.append(r)
        den = 1
        for r in fr:
            for x in r:
                den = lcm(den, x.denominator)
        ints = [[int(x * den) for x in r] for r in fr]
        h = integer_hnf(ints, ambient)
        if not h:
            return Lattice(ambient, 1, ())
        g = den
        for row in h:
            for x in row:
                g = gcd(g, x)
        return Lattice(ambient, den // g, tuple(tuple(x // g for x in row) for row in h))

    @staticmethod
    def standard(ambient):
        """Z^ambient."""
        eye = tuple(tuple(int(i == j) for j in range(ambient)) for i in range(ambient))
        return Lattice(ambient, 1, eye)

    @property
    def rank(self):
        return len(self.rows)

    def fraction_rows(self):
        return tuple(tuple(Fraction(x, self.scale) for x in row) for row in self.rows)

    def pivots(self):
        return tuple(_first_nonzero(row) for row in self.rows)

    def _reduce(self, vec):
        """Scaled pivot reduction; returns (residue, coefficients) or None
        when the scaled vector is not integral."""
        if len(vec) != self.ambient:
            raise DimensionMismatchError(
                "vector has %d coordinates in ambient %d" % (len(vec), self.ambient))
        w = [Fraction(x) * self.scale for x in vec]
        if any(x.denominator != 1 for x in w):
            return None
        w = [int(x) for x in w]
        coeffs = []
        for row in self.rows:
            p = _first_nonzero(row)
            q, rem = divmod(w[p], row[p])
            if rem:
                coeffs.append(None)
                continue
            if q:
                w = [a - q * b for a, b in zip(w, row)]
            coeffs.append(q)
        return w, coeffs

    def member(self, vec):
        red = self._reduce(vec)
        if red is None:
            return False
        w, coeffs = red
        return not any(w) and None not in coeffs

    def solve_coords(self, vec):
        """Integer coordinates of ``vec`` over the canonical basis rows,
        or None if it is not a member."""
        red = self._reduce(vec)
        if red is None:
            return None
        w, coeffs = red
        if any(w) or None in coeffs:
            return None
        return tuple(coeffs)

    def project_prefix(self, t):
        """Image lattice under projection onto the first ``t`` coordinates."""
        return Lattice.from_rows(t, [row[:t] for row in self.fraction_rows()])

    def vanishing_prefix(self, t):
        """Sublattice of elements vanishing on the first ``t`` coordinates,
        re-expressed on the remaining ``ambient - t`` coordinates.

        The canonical basis is echelon, so these elements are exactly the
        integer span of the basis rows whose pivot is at index >= t.
        """
        keep = [row for row in self.rows if _first_nonzero(row) >= t]
        return Lattice.from_rows(
            self.ambient - t,
            [tuple(Fraction(x, self.scale) for x in row[t:]) for row in keep])


def hnf(rows, ambient):
    """Canonical lattice spanned by rational rows (the public entry point
    for 'bring this generating set to Hermite normal form')."""
    return Lattice.from_rows(ambient, rows)


def kernel_lattice(rows, width):
    """Lattice of integer null combinations ``{z in Z^len(rows) : z @ rows = 0}``.

    ``rows`` may be rational; a global scaling clears denominators and
    leaves the kernel unchanged.
    """
    fr = [tuple(Fraction(x) for x in r) for r in rows]
    for r in fr:
        if len(r) != width:
            raise DimensionMismatchError("row width %d != %d" % (len(r), width))
    den = 1
    for r in fr:
        for x in r:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in r] for r in fr]
    _, _, kernel = hnf_with_transform(ints, width)
    return Lattice.from_rows(len(rows), kernel)


def sublattice_inclusion(a, b):
    """True iff every element of ``a`` lies in ``b`` (same ambient)."""
    if a.ambient != b.ambient:
        raise DimensionMismatchError("ambients differ: %d vs %d" % (a.ambient, b.ambient))
    return all(b.member(row) for row in a.fraction_rows())


def frac_rank(rows):
    """Rank over Q of a matrix of Fractions/ints."""
    if not rows:
        return 0
    den = 1
    fr = [tuple(Fraction(x) for x in r) for r in rows]
    for r in fr:
        for x in r:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in r] for r in fr]
    return len(integer_hnf(ints, len(ints[0])))
