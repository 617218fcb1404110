"""Integral cohomology rings of quasitoric manifolds, exactly.

The ring is the quotient of Z[v_1..v_m] (one degree-2 generator per
facet) by the face-complex monomial ideal together with the n linear
forms given by the rows of the characteristic matrix.  Concretely we:

1. pick a maximal face J whose characteristic minor is unimodular (it
   always is) and eliminate the variables of J integrally, preferring
   faces with the highest labels so low-numbered facets survive as the
   published generators;
2. present each graded slice as the free module on the surviving
   monomials of that degree modulo the rewritten monomial relations,
   and choose the slice basis as the standard monomials of an integer
   Hermite normal form taken in descending graded-lex order (relations
   eliminate the lex-largest monomials first);
3. tabulate all cup products between basis monomials.

Slices above the top degree 2n vanish; `cup` silently returns zero
there.  The graded ranks must reproduce the h-vector or the input was
not a valid manifold after all (`RankMismatchError`).

All structure constants are integers and all choices are deterministic,
so two runs on equal input produce byte-identical rings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import RankMismatchError, WrongDimensionError
from .linalg import det_int, int_inverse_unimodular, integer_hnf, is_unimodular, mat_mul
from .manifold import ValidatedManifold


def _monomials_desc(nvars, degree):
    """Exponent tuples of total degree ``degree``, descending lex."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for e in range(degree, -1, -1):
        for rest in _monomials_desc(nvars - 1, degree - e):
            out.append((e,) + rest)
    return out


def _poly_mul(p, q):
    out = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            val = out.get(key, 0) + ca * cb
            if val:
                out[key] = val
            elif key in out:
                del out[key]
    return out


def _linear_poly(row):
    return {tuple(int(k == i) for k in range(len(row))): c
            for i, c in enumerate(row) if c}


def minimal_nonfaces(m, maximal_faces, max_size):
    """Minimal non-faces of the complex, up to the given cardinality."""
    maximal = [frozenset(f) for f in maximal_faces]

    def is_face(s):
        return any(s <= mf for mf in maximal)

    out = []
    for size in range(1, max_size + 1):
        for sub in combinations(range(1, m + 1), size):
            s = frozenset(sub)
            if is_face(s):
                continue
            if all(is_face(s - {x}) for x in s):
                out.append(sub)
    return tuple(out)


@dataclass(frozen=True)
class RingElement:
    """Homogeneous class: degree index i (cohomological degree 2i) plus
    integer coordinates over the chosen degree-i basis."""

    degree: int
    coords: tuple

    def is_zero(self):
        return not any(self.coords)


@dataclass(frozen=True)
class GradedRing:
    """Integral cohomology ring with a fixed monomial basis per degree.

    ``bases[i]`` lists exponent tuples over the surviving generators
    (``generators`` holds their original 1-based facet labels);
    ``tables[(i, j)]`` for i <= j, i + j <= n stores the coordinates of
    each basis product in degree i + j.  ``subst`` and ``nonfaces``
    carry the defining presentation (images of all m original
    generators, and the minimal non-faces of size <= n); they are set
    to None on rings deserialized from JSON and are excluded from
    equality.
    """

    n: int
    ranks: tuple
    generators: tuple
    bases: tuple
    tables: dict
    subst: tuple = field(compare=False, repr=False, default=None)
    nonfaces: tuple = field(compare=False, repr=False, default=None)

    def rank(self, i):
        if 0 <= i <= self.n:
            return self.ranks[i]
        return 0

    def zero(self, i):
        return RingElement(i, (0,) * self.rank(i))

    def unit(self):
        return RingElement(0, (1,))

    def basis_element(self, i, idx):
        coords = [0] * self.rank(i)
        coords[idx] = 1
        return RingElement(i, tuple(coords))

    def monomial_label(self, i, idx):
        exps = self.bases[i][idx]
        if not any(exps):
            return "1"
        parts = []
        for g, e in zip(self.generators, exps):
            if e == 1:
                parts.append("v%d" % g)
            elif e > 1:
                parts.append("v%d^%d" % (g, e))
        return "*".join(parts)

    def labels(self, i):
        return tuple(self.monomial_label(i, k) for k in range(self.rank(i)))

    def table(self, i, j):
        if i <= j:
            return self.tables[(i, j)]
        swapped = self.tables[(j, i)]
        # all degrees are even, so the ring is commutative on the nose
        na, nb = self.rank(i), self.rank(j)
        return tuple(tuple(swapped[b][a] for b in range(nb)) for a in range(na))

    def cup(self, a: RingElement, b: RingElement) -> RingElement:
        i, j = a.degree, b.degree
        d = i + j
        if d > self.n:
            return self.zero(d)
        tab = self.table(i, j)
        out = [0] * self.rank(d)
        for x, ca in enumerate(a.coords):
            if not ca:
                continue
            row = tab[x]
            for y, cb in enumerate(b.coords):
                if not cb:
                    continue
                cell = row[y]
                f = ca * cb
                for t, c in enumerate(cell):
                    if c:
                        out[t] += f * c
        return RingElement(d, tuple(out))

    def pairing_matrix(self, i):
        """Top-degree coefficients of products H^{2i} x H^{2(n-i)}."""
        if not (0 <= i <= self.n):
            raise WrongDimensionError("no pairing in degree %d" % (2 * i))
        tab = self.table(i, self.n - i)
        return tuple(tuple(cell[0] for cell in row) for row in tab)


def cup(ring: GradedRing, a: RingElement, b: RingElement) -> RingElement:
    return ring.cup(a, b)


def _pivot_face(v: ValidatedManifold):
    """Maximal face used for variable elimination: the one whose label
    set is lexicographically largest when read in descending order."""
    return max(v.data.maximal_faces, key=lambda f: tuple(sorted(f, reverse=True)))


def _slice_basis(rel_rows, monos, expect_rank):
    """Standard-monomial basis of one graded slice.

    ``rel_rows`` span the relation subgroup of Z^monos.  Tries the given
    column order (descending graded-lex), then its reverse; a monomial
    basis requires every HNF pivot to be 1.
    """
    width = len(monos)
    rows = sorted(set(tuple(r) for r in rel_rows if any(r)), reverse=True)
    for flip in (False, True):
        cols = list(range(width))
        if flip:
            cols.reverse()
        h = integer_hnf([[r[c] for c in cols] for r in rows], width)
        if len(monos) - len(h) != expect_rank:
            raise RankMismatchError(
                "graded slice has rank %d, h-vector expects %d" % (len(monos) - len(h), expect_rank))
        pivots = {}
        ok = True
        for row in h:
            p = next(k for k, x in enumerate(row) if x)
            if row[p] != 1:
                ok = False
                break
            pivots[p] = row
        if not ok:
            continue
        basis_cols = [c for c in range(width) if c not in pivots]
        # Back-substitute, last pivot first; tails only reference later columns.
        reduce_to = {}
        for c in basis_cols:
            vec = [0] * len(basis_cols)
            vec[basis_cols.index(c)] = 1
            reduce_to[c] = tuple(vec)
        for p in sorted(pivots, reverse=True):
            row = pivots[p]
            vec = [0] * len(basis_cols)
            for c in range(p + 1, width):
                if row[c]:
                    for t, x in enumerate(reduce_to[c]):
                        vec[t] -= row[c] * x
            reduce_to[p] = tuple(vec)
        basis = tuple(monos[cols[c]] for c in basis_cols)
        reducer = {monos[cols[c]]: reduce_to[c] for c in range(width)}
        return basis, reducer
    raise RankMismatchError("no monomial basis in either scan order for this slice")


def cohomology(v: ValidatedManifold) -> GradedRing:
    """Davis-Januszkiewicz presentation, reduced to explicit tables."""
    m, n = v.m, v.n
    lam = v.data.lam
    pivot_face = _pivot_face(v)
    survivors = tuple(c for c in range(1, m + 1) if c not in pivot_face)
    jcols = tuple(sorted(pivot_face))
    nv = len(survivors)

    a = [[lam[r][c - 1] for c in jcols] for r in range(n)]
    b = [[lam[r][c - 1] for c in survivors] for r in range(n)]
    ainv = int_inverse_unimodular(a)
    # v_{J[t]} = sum_k S[t][k] * survivor_k, integrally
    s = mat_mul(ainv, b)
    s = tuple(tuple(-x for x in row) for row in s)

    subst = [None] * (m + 1)
    for k, c in enumerate(survivors):
        subst[c] = tuple(int(k == t) for t in range(nv))
    for t, c in enumerate(jcols):
        subst[c] = s[t]
    subst = tuple(subst[1:])

    nonfaces = minimal_nonfaces(m, v.data.maximal_faces, n)
    nf_polys = []
    for nf in nonfaces:
        poly = {(0,) * nv: 1}
        for vv in nf:
            poly = _poly_mul(poly, _linear_poly(subst[vv - 1]))
        nf_polys.append((len(nf), poly))

    bases = []
    reducers = []
    for i in range(n + 1):
        monos = _monomials_desc(nv, i)
        index = {e: k for k, e in enumerate(monos)}
        rel_rows = []
        for size, poly in nf_polys:
            if size > i:
                continue
            for nu in _monomials_desc(nv, i - size):
                row = [0] * len(monos)
                for e, c in poly.items():
                    row[index[tuple(x + y for x, y in zip(e, nu))]] = c
                rel_rows.append(row)
        basis, reducer = _slice_basis(rel_rows, monos, v.h_vector[i])
        bases.append(basis)
        reducers.append(reducer)

    tables = {}
    for i in range(n + 1):
        for j in range(i, n + 1 - i):
            tab = []
            for ea in bases[i]:
                row = []
                for eb in bases[j]:
                    key = tuple(x + y for x, y in zip(ea, eb))
                    row.append(reducers[i + j][key])
                tab.append(tuple(row))
            tables[(i, j)] = tuple(tab)

    ring = GradedRing(
        n=n,
        ranks=tuple(len(bs) for bs in bases),
        generators=survivors,
        bases=tuple(bases),
        tables=tables,
        subst=subst,
        nonfaces=nonfaces,
    )
    top = ring.rank(n)
    if top != 1:
        raise RankMismatchError("top degree has rank %d, expected 1" % top)
    return ring


# --- ring maps -------------------------------------------------------------

@dataclass(frozen=True)
class RingMap:
    """Degree-preserving additive map recorded as one integer matrix per
    degree (rows indexed by source basis, coordinates in the target)."""

    src: GradedRing
    dst: GradedRing
    matrices: tuple

    def apply(self, el: RingElement) -> RingElement:
        i = el.degree
        if i > self.src.n:
            return self.dst.zero(i)
        mat = self.matrices[i]
        out = [0] * self.dst.rank(i)
        for a, c in enumerate(el.coords):
            if c:
                for t, x in enumerate(mat[a]):
                    out[t] += c * x
        return RingElement(i, tuple(out))


@dataclass(frozen=True)
class MapCheck:
    ok: bool
    reason: str = None

    def __bool__(self):
        return self.ok


def ring_map_from_degree2(src: GradedRing, dst: GradedRing, q) -> RingMap | None:
    """Extend a degree-2 assignment to a full ring map, or None.

    ``q`` has one integer row per source degree-2 basis class, written in
    the target degree-2 basis.  Returns None when some defining relation
    of the source fails to vanish in the target; bijectivity is not
    checked here (see `verify_ring_map`).
    """
    if src.nonfaces is None or src.subst is None:
        raise ValueError("source ring carries no presentation (deserialized?)")
    if src.n != dst.n:
        return None
    q = tuple(tuple(int(x) for x in row) for row in q)
    if len(q) != src.rank(1) or any(len(row) != dst.rank(1) for row in q):
        raise WrongDimensionError("degree-2 matrix must be %d x %d" % (src.rank(1), dst.rank(1)))

    def image_of_linear(row):
        out = [0] * dst.rank(1)
        for k, c in enumerate(row):
            if c:
                for t, x in enumerate(q[k]):
                    out[t] += c * x
        return RingElement(1, tuple(out))

    for nf in src.nonfaces:
        if len(nf) > src.n:
            continue  # lands above the top degree, vanishes for free
        cls = dst.unit()
        for vv in nf:
            cls = dst.cup(cls, image_of_linear(src.subst[vv - 1]))
        if not cls.is_zero():
            return None

    matrices = [((1,),), q]
    for i in range(2, src.n + 1):
        rows = []
        for exps in src.bases[i]:
            cls = dst.unit()
            for k, e in enumerate(exps):
                for _ in range(e):
                    cls = dst.cup(cls, RingElement(1, q[k]))
            rows.append(cls.coords)
        matrices.append(tuple(rows))
    return RingMap(src=src, dst=dst, matrices=tuple(matrices))


def verify_ring_map(f: RingMap) -> MapCheck:
    """Certify a RingMap as a unital graded ring isomorphism.

    Checks rank profiles, unitality, per-degree integer invertibility,
    and multiplicativity on every basis pair whose product stays within
    the top degree.  Never raises; failures carry a reason.
    """
    src, dst = f.src, f.dst
    if src.n != dst.n:
        return MapCheck(False, "top degrees differ: %d vs %d" % (2 * src.n, 2 * dst.n))
    n = src.n
    if len(f.matrices) != n + 1:
        return MapCheck(False, "expected %d degree matrices, got %d" % (n + 1, len(f.matrices)))
    for i in range(n + 1):
        if src.rank(i) != dst.rank(i):
            return MapCheck(False, "rank mismatch in degree %d: %d vs %d"
                            % (2 * i, src.rank(i), dst.rank(i)))
        mat = f.matrices[i]
        if len(mat) != src.rank(i) or any(len(r) != dst.rank(i) for r in mat):
            return MapCheck(False, "matrix shape wrong in degree %d" % (2 * i))
    if f.matrices[0] != ((1,),):
        return MapCheck(False, "map is not unital")
    for i in range(1, n + 1):
        if not is_unimodular(f.matrices[i]):
            return MapCheck(False, "degree %d matrix is not invertible over Z" % (2 * i))
    for i in range(n + 1):
        for j in range(i, n + 1 - i):
            for a in range(src.rank(i)):
                xa = src.basis_element(i, a)
                fa = f.apply(xa)
                for b in range(src.rank(j)):
                    xb = src.basis_element(j, b)
                    lhs = f.apply(src.cup(xa, xb))
                    rhs = dst.cup(fa, f.apply(xb))
                    if lhs != rhs:
                        return MapCheck(
                            False,
                            "not multiplicative on degree (%d, %d) basis pair (%d, %d)"
                            % (2 * i, 2 * j, a, b))
    return MapCheck(True)


def identity_ring_map(ring: GradedRing) -> RingMap:
    mats = []
    for i in range(ring.n + 1):
        r = ring.rank(i)
        mats.append(tuple(tuple(int(x == y) for y in range(r)) for x in range(r)))
    return RingMap(src=ring, dst=ring, matrices=tuple(mats))


def compose_ring_maps(g: RingMap, f: RingMap) -> RingMap:
    """g after f."""
    if f.dst is not g.src and f.dst != g.src:
        raise WrongDimensionError("maps do not compose")
    mats = tuple(mat_mul(f.matrices[i], g.matrices[i]) for i in range(f.src.n + 1))
    return RingMap(src=f.src, dst=g.dst, matrices=mats)


def invert_ring_map(f: RingMap) -> RingMap:
    mats = tuple(int_inverse_unimodular(m) for m in f.matrices)
    return RingMap(src=f.dst, dst=f.src, matrices=mats)


# --- mod 2 quadratic data ---------------------------------------------------

@dataclass(frozen=True)
class Mod2Squares:
    """Value table of x -> x^2 on H^2( ;F_2) of a 4-dimensional ring.

    ``values`` maps every coefficient tuple over F_2 to 0 or 1 (H^4 with
    F_2 coefficients is one-dimensional); ``nonzero_count`` counts the
    classes with nonzero square.  Both are isomorphism invariants.
    """

    nonzero_count: int
    values: tuple

    @property
    def identically_zero(self):
        return self.nonzero_count == 0


def mod2_square_rank(ring: GradedRing) -> Mod2Squares:
    if ring.n != 2:
        raise WrongDimensionError("mod-2 square table needs a 4-dimensional ring, top degree is %d"
                                  % (2 * ring.n))
    ell = ring.rank(1)
    values = []
    count = 0
    for bits in product((0, 1), repeat=ell):
        el = RingElement(1, bits)
        sq = ring.cup(el, el).coords[0] % 2
        values.append((bits, sq))
        count += sq
    return Mod2Squares(nonzero_count=count, values=tuple(values))
