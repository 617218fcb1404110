"""K-theory of quasitoric manifolds as Chern-character lattices.

For a torsion-free evenly generated space the Chern character embeds
K(X) into rational cohomology, so complex K-theory is faithfully
recorded as the image lattice inside ``H^2 + H^4 + ... + H^2n`` with
rational coordinates (reduced: degree 0 is dropped).  The lattice is
generated by the classes

    ch( prod_i (L_i - 1)^{a_i} ) = prod_i (e^{x_i} - 1)^{a_i},

one for each exponent vector ``a`` with ``1 <= |a| <= n``, where the
``x_i`` run over the chosen degree-2 basis and each ``L_i`` is the line
bundle with first Chern class ``x_i``.  Higher powers of a single factor
vanish above the top degree, so this finite family already generates.

The fullness invariant (each associated-graded piece projects onto the
full integral cohomology of its degree) is what makes admissible bases
exist: a basis ``xi^i_j`` with ``ch(xi^i_j) = x^i_j + higher order``.
`admissible_basis` constructs the canonical one, with tails reduced to
least nonnegative coset representatives; its top coordinates are the
generalized e-invariants consumed by `qtor.einvariant`.

`lift_iso` lifts a verified cohomology ring isomorphism theta_bar to a
K-lattice isomorphism by sending generator to corresponding generator,
which is well defined exactly when the integer relation lattice of the
source generators embeds in the target's.  The resulting matrix is the
unique one commuting with ch, and the implementation verifies that
identity exactly before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .cohomology import GradedRing, RingElement, RingMap, verify_ring_map
from .errors import FullnessFailureError, KernelMismatchError, NotIsoError
from .linalg import (
    Lattice,
    det_int,
    hnf_with_transform,
    kernel_lattice,
    sublattice_inclusion,
)


def _exponent_vectors(nvars, max_total):
    """All a with 1 <= |a| <= max_total, graded, descending lex inside
    each grade; this fixed order aligns generator logs across modules."""
    from .cohomology import _monomials_desc
    out = []
    for total in range(1, max_total + 1):
        out.extend(_monomials_desc(nvars, total))
    return out


class _ClassArith:
    """Rational cohomology classes of mixed degree over a GradedRing,
    stored per degree 1..n; just enough arithmetic for ch computations."""

    def __init__(self, ring):
        self.ring = ring
        self.n = ring.n

    def zero(self):
        return tuple((Fraction(0),) * self.ring.rank(i) for i in range(1, self.n + 1))

    def mul(self, c1, c2):
        out = [list((Fraction(0),) * self.ring.rank(d)) for d in range(1, self.n + 1)]
        for i in range(1, self.n + 1):
            blk1 = c1[i - 1]
            if not any(blk1):
                continue
            for j in range(1, self.n + 1 - i):
                blk2 = c2[j - 1]
                if not any(blk2):
                    continue
                tab = self.ring.table(i, j)
                tgt = out[i + j - 1]
                for a, ca in enumerate(blk1):
                    if not ca:
                        continue
                    row = tab[a]
                    for b, cb in enumerate(blk2):
                        if not cb:
                            continue
                        f = ca * cb
                        for t, c in enumerate(row[b]):
                            if c:
                                tgt[t] += f * c
        return tuple(tuple(blk) for blk in out)

    def exp_minus_one(self, deg2_coords):
        """e^x - 1 for x the degree-2 class with the given coordinates."""
        x = RingElement(1, tuple(int(c) for c in deg2_coords))
        power = self.ring.unit()
        blocks = [None] * self.n
        for k in range(1, self.n + 1):
            power = self.ring.cup(power, x)
            blocks[k - 1] = tuple(Fraction(c, factorial(k)) for c in power.coords)
        return tuple(blocks)

    def flatten(self, cls):
        row = []
        for blk in cls:
            row.extend(blk)
        return tuple(row)


def _generator_rows(ring, deg2_rows):
    """Chern rows of all monomial generators built from the classes whose
    degree-2 coordinates are ``deg2_rows`` (in this ring)."""
    arith = _ClassArith(ring)
    ell = len(deg2_rows)
    factors = [arith.exp_minus_one(row) for row in deg2_rows]
    exps = _exponent_vectors(ell, ring.n)
    memo = {}
    rows = []
    for a in exps:
        s = next(k for k, e in enumerate(a) if e)
        prev = tuple(e - int(k == s) for k, e in enumerate(a))
        if not any(prev):
            cls = factors[s]
        else:
            cls = arith.mul(memo[prev], factors[s])
        memo[a] = cls
        rows.append(arith.flatten(cls))
    return exps, rows


@dataclass(frozen=True)
class KLattice:
    """Chern-character image lattice of an evenly generated complex.

    ``ranks[i-1]`` is the rank of degree 2i; coordinates are blocked by
    ascending degree.  ``gens`` logs the generating family as pairs
    (exponent vector, rational row); it is None for derived lattices
    (skeleta, quotients) whose generators are not monomial.
    """

    ranks: tuple
    labels: tuple
    lattice: Lattice
    gens: tuple = None

    @property
    def n(self):
        return len(self.ranks)

    @property
    def ambient(self):
        return sum(self.ranks)

    def block_offsets(self):
        offs = [0]
        for r in self.ranks:
            offs.append(offs[-1] + r)
        return tuple(offs)


def _block_of(offsets, col):
    for i in range(len(offsets) - 1):
        if offsets[i] <= col < offsets[i + 1]:
            return i + 1
    raise IndexError(col)


def _check_fullness(ranks, lattice):
    ambient = sum(ranks)
    if lattice.ambient != ambient:
        raise FullnessFailureError("lattice ambient %d != %d" % (lattice.ambient, ambient))
    if lattice.rank != ambient:
        raise FullnessFailureError("lattice rank %d, expected %d" % (lattice.rank, ambient))
    offs = [0]
    for r in ranks:
        offs.append(offs[-1] + r)
    pivots = lattice.pivots()
    frows = lattice.fraction_rows()
    for i in range(1, len(ranks) + 1):
        ni = ranks[i - 1]
        if ni == 0:
            continue
        rows_i = [frows[r] for r in range(len(frows)) if offs[i - 1] <= pivots[r] < offs[i]]
        if len(rows_i) != ni:
            raise FullnessFailureError("degree %d carries %d pivots, expected %d"
                                       % (2 * i, len(rows_i), ni))
        block = [row[offs[i - 1]:offs[i]] for row in rows_i]
        if Lattice.from_rows(ni, block) != Lattice.standard(ni):
            raise FullnessFailureError(
                "degree %d leading coefficients span a proper sublattice of Z^%d" % (2 * i, ni))


def make_klattice(ranks, labels, lattice, gens=None) -> KLattice:
    """Validating constructor: rank and fullness checks in one place."""
    ranks = tuple(int(r) for r in ranks)
    labels = tuple(labels)
    if len(labels) != sum(ranks):
        raise ValueError("%d labels for ambient dimension %d" % (len(labels), sum(ranks)))
    _check_fullness(ranks, lattice)
    return KLattice(ranks=ranks, labels=labels, lattice=lattice, gens=gens)


def chern_image(ring: GradedRing) -> KLattice:
    ell = ring.rank(1)
    eye = [tuple(int(k == t) for t in range(ell)) for k in range(ell)]
    exps, rows = _generator_rows(ring, eye)
    ambient = sum(ring.rank(i) for i in range(1, ring.n + 1))
    lattice = Lattice.from_rows(ambient, rows)
    labels = []
    for i in range(1, ring.n + 1):
        labels.extend(ring.labels(i))
    gens = tuple((a, tuple(row)) for a, row in zip(exps, rows))
    return make_klattice(tuple(ring.rank(i) for i in range(1, ring.n + 1)),
                         labels, lattice, gens)


@dataclass(frozen=True)
class AdmissibleElement:
    degree: int   # i, for cohomological degree 2i
    index: int    # 1-based position within the degree
    row: tuple    # full ambient coordinates, Fractions


@dataclass(frozen=True)
class AdmissibleBasis:
    ranks: tuple
    elements: tuple

    def element(self, i, j):
        for el in self.elements:
            if el.degree == i and el.index == j:
                return el
        raise KeyError((i, j))


def admissible_basis(kl: KLattice) -> AdmissibleBasis:
    """Canonical admissible basis xi^i_j of the lattice.

    Leading term: the degree-2i block of xi^i_j is the j-th basis vector
    and all lower blocks vanish.  Tail: reduced modulo the sublattice
    vanishing through degree 2i, coordinatewise into the least
    nonnegative range, so the output is unique.
    """
    offs = kl.block_offsets()
    scale = kl.lattice.scale
    srows = kl.lattice.rows
    pivots = kl.lattice.pivots()
    by_block = {}
    for r, p in enumerate(pivots):
        by_block.setdefault(_block_of(offs, p), []).append(r)

    elements = []
    for i in range(1, kl.n + 1):
        ni = kl.ranks[i - 1]
        if ni == 0:
            continue
        rows_i = by_block.get(i, [])
        block = [[srows[r][c] for c in range(offs[i - 1], offs[i])] for r in rows_i]
        h, t, _ = hnf_with_transform(block, ni)
        assert [list(row) for row in h] == [[scale * int(x == y) for y in range(ni)]
                                            for x in range(ni)], "fullness check out of sync"
        later = [r for r in range(len(srows)) if pivots[r] >= offs[i]]
        for j in range(ni):
            vec = [0] * kl.ambient
            for rr, coef in zip(rows_i, t[j]):
                if coef:
                    vec = [x + coef * y for x, y in zip(vec, srows[rr])]
            for rr in later:
                p = pivots[rr]
                q = vec[p] // srows[rr][p]
                if q:
                    vec = [x - q * y for x, y in zip(vec, srows[rr])]
            elements.append(AdmissibleElement(
                degree=i, index=j + 1,
                row=tuple(Fraction(x, scale) for x in vec)))

    basis = AdmissibleBasis(ranks=kl.ranks, elements=tuple(elements))
    assert Lattice.from_rows(kl.ambient, [el.row for el in basis.elements]) == kl.lattice, \
        "admissible elements failed to span the lattice"
    return basis


def skeleton_truncate(kl: KLattice, degree_cap: int) -> KLattice:
    """Restriction to the 2k-skeleton: drop all coordinates above the cap.

    ``degree_cap`` is the even cohomological degree 2k, 0 <= 2k <= 2n.
    """
    if degree_cap % 2:
        raise ValueError("degree cap must be even, got %d" % degree_cap)
    k = degree_cap // 2
    if not 0 <= k <= kl.n:
        raise ValueError("degree cap %d outside 0..%d" % (degree_cap, 2 * kl.n))
    if k == kl.n:
        return kl
    ranks = kl.ranks[:k]
    t = sum(ranks)
    lattice = kl.lattice.project_prefix(t)
    gens = None
    if kl.gens is not None:
        gens = tuple((a, row[:t]) for a, row in kl.gens)
    return make_klattice(ranks, kl.labels[:t], lattice, gens)


def quotient_data(kl: KLattice, degree_cap: int) -> KLattice:
    """K-theory of the cofiber of the 2k-skeleton inclusion: the
    sublattice with no Chern character through degree 2k, written on the
    remaining coordinates."""
    if degree_cap % 2:
        raise ValueError("degree cap must be even, got %d" % degree_cap)
    k = degree_cap // 2
    if not 0 <= k <= kl.n:
        raise ValueError("degree cap %d outside 0..%d" % (degree_cap, 2 * kl.n))
    ranks = kl.ranks[k:]
    t = sum(kl.ranks[:k])
    lattice = kl.lattice.vanishing_prefix(t)
    return make_klattice(ranks, kl.labels[t:], lattice, None)


# --- lifting ring isomorphisms ----------------------------------------------

@dataclass(frozen=True)
class KIso:
    """Lattice isomorphism in the canonical bases, lifting theta_bar."""

    src: KLattice
    dst: KLattice
    matrix: tuple
    theta_bar: RingMap

    def apply_ambient(self, row):
        """theta_bar on rational cohomology, applied blockwise."""
        offs = self.src.block_offsets()
        out = []
        for i in range(1, self.src.n + 1):
            blk = row[offs[i - 1]:offs[i]]
            mat = self.theta_bar.matrices[i]
            width = self.dst.ranks[i - 1]
            img = [Fraction(0)] * width
            for a, c in enumerate(blk):
                if c:
                    for tcol, x in enumerate(mat[a]):
                        img[tcol] += c * x
            out.extend(img)
        return tuple(out)

    def is_identity(self):
        return all(
            self.matrix[a][b] == int(a == b)
            for a in range(len(self.matrix)) for b in range(len(self.matrix)))


def compose_kiso(g: KIso, f: KIso) -> KIso:
    """g after f (matrices compose in row convention)."""
    from .cohomology import compose_ring_maps
    from .linalg import mat_mul
    return KIso(src=f.src, dst=g.dst,
                matrix=mat_mul(f.matrix, g.matrix),
                theta_bar=compose_ring_maps(g.theta_bar, f.theta_bar))


def _dedupe(rows):
    """Indices of first occurrences of distinct nonzero rows, plus the
    zero/duplicate bookkeeping needed for kernel comparisons."""
    keep = []
    rep = {}
    zeros = []
    dups = []
    seen = {}
    for idx, row in enumerate(rows):
        if not any(row):
            zeros.append(idx)
            continue
        if row in seen:
            dups.append((idx, seen[row]))
            continue
        seen[row] = idx
        rep[idx] = len(keep)
        keep.append(idx)
    return keep, zeros, dups


def lift_iso(src, dst, theta_bar: RingMap) -> KIso:
    """Lift a verified ring isomorphism to the K-lattices.

    ``src`` and ``dst`` are (GradedRing, KLattice) pairs.  The lift sends
    the generator logged for exponent vector ``a`` in the source to the
    class with the same exponent vector built from the theta_bar-images
    of the degree-2 basis.  That assignment descends to the lattices iff
    every integer relation among the source generators also holds among
    the target ones (`KernelMismatchError` otherwise), and is an
    isomorphism iff the induced matrix is invertible over Z
    (`NotIsoError` otherwise).  The returned matrix satisfies
    ch o theta = (theta_bar tensor Q) o ch exactly; this is checked.
    """
    ring1, k1 = src
    ring2, k2 = dst
    chk = verify_ring_map(theta_bar)
    if not chk:
        raise NotIsoError("ring map fails verification: %s" % chk.reason)

    if k1.gens is not None:
        exps = tuple(a for a, _ in k1.gens)
        g1 = [tuple(Fraction(x) for x in row) for _, row in k1.gens]
    else:
        exps, g1 = _generator_rows(ring1, [tuple(int(k == t) for t in range(ring1.rank(1)))
                                           for k in range(ring1.rank(1))])
    _, g2 = _generator_rows(ring2, [theta_bar.matrices[1][k]
                                    for k in range(ring1.rank(1))])

    # Kernel comparison, factored through deduplication so the relation
    # lattices stay desk-sized: zero rows and repeats are themselves
    # kernel generators and are checked directly.
    keep, zeros, dups = _dedupe(g1)
    for idx in zeros:
        if any(g2[idx]):
            raise KernelMismatchError(
                "generator %r vanishes in the source but not the target" % (exps[idx],))
    for idx, first in dups:
        if g2[idx] != g2[first]:
            raise KernelMismatchError(
                "generators %r and %r agree in the source but not the target"
                % (exps[idx], exps[first]))
    ker1 = kernel_lattice([g1[i] for i in keep], k1.ambient)
    ker2 = kernel_lattice([g2[i] for i in keep], k2.ambient)
    if not sublattice_inclusion(ker1, ker2):
        raise KernelMismatchError("source relation lattice does not embed in the target's")

    from math import lcm as _lcm
    den = 1
    for i in keep:
        for x in g1[i]:
            den = _lcm(den, x.denominator)
    scaled = [[int(x * den) for x in g1[i]] for i in keep]
    h, t, _ = hnf_with_transform(scaled, k1.ambient)
    assert len(h) == k1.lattice.rank
    basis_rows = k1.lattice.fraction_rows()

    matrix = []
    for r in range(len(h)):
        brow = tuple(Fraction(x, den) for x in h[r])
        assert brow == basis_rows[r], "canonical basis out of sync"
        img = [Fraction(0)] * k2.ambient
        for coef, i in zip(t[r], keep):
            if coef:
                row2 = g2[i]
                img = [x + coef * y for x, y in zip(img, row2)]
        coords = k2.lattice.solve_coords(img)
        if coords is None:
            raise NotIsoError("image of a source basis vector escapes the target lattice")
        matrix.append(coords)
    matrix = tuple(matrix)
    if abs(det_int(matrix)) != 1:
        raise NotIsoError("induced matrix is not invertible over Z")

    iso = KIso(src=k1, dst=k2, matrix=matrix, theta_bar=theta_bar)
    # ch-compatibility is forced; make the uniqueness identity explicit.
    dst_rows = k2.lattice.fraction_rows()
    for r, brow in enumerate(basis_rows):
        via_matrix = [Fraction(0)] * k2.ambient
        for c, coef in enumerate(matrix[r]):
            if coef:
                via_matrix = [x + coef * y for x, y in zip(via_matrix, dst_rows[c])]
        assert tuple(via_matrix) == iso.apply_ambient(brow), "lift does not commute with ch"
    return iso
