"""Adams e-invariants on mapping-cone data and the p-local criterion.

A map f from an odd sphere S^{2r-1} into an evenly generated complex X
is recorded here only through the K-theory of its cone: the extended
Chern-character lattice on H^even(X;Q) + Q.u, where u is the class of
the new 2r-cell.  The lattice must restrict to the K-lattice of X and
must meet the u-axis in exactly Z.u (the image of the collapse map).

Each admissible basis element of X lifts to the cone, uniquely up to an
integer multiple of the u-class, and the u-coordinate of the lift is the
generalized e-invariant of that element.  Only its class mod 1 is
independent of the lift, so reports carry both the raw value and the
reduction.  Rows in the top degree of X, with r strictly above it, are
the classical e-invariants of the compositions of f with the pinch maps
onto top spheres; those rows carry a flag and power the nontriviality
direction of the p-local criterion.

The criterion itself: if every entry is p-integral and the top degree
2d satisfies d <= p^2 - 2, the p-localization of f is stably null
homotopic; a flagged entry with p in the denominator certifies the
opposite whenever the stem degree k = r - d is within the range
k <= p^2 - 3 where the e-invariant is injective on the p-component.
Everything else is honestly Inconclusive.  p = 2 is rejected: the
machinery is odd-primary, and dimension <= 4 arguments live in
`qtor.rigidity` instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .cohomology import RingMap
from .errors import (
    DimensionMismatchError,
    EvenPrimeError,
    FullnessFailureError,
    KernelMismatchError,
    LiftFailedError,
    MalformedConeError,
    NotDeformableError,
    NotIsoError,
    RangeExceededError,
)
from .ktheory import KIso, KLattice, lift_iso, make_klattice, quotient_data, skeleton_truncate
from .linalg import Lattice, det_int


def is_prime(p) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for q in range(3, isqrt(p) + 1, 2):
        if p % q == 0:
            return False
    return True


def _require_odd_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError("p must be a prime, got %r" % (p,))
    if p == 2:
        raise EvenPrimeError()


def mod1(a: Fraction) -> Fraction:
    """Canonical representative of a + Z in [0, 1)."""
    return Fraction(a) % 1


def classical_e(n: int, k: int, a) -> Fraction:
    """Classical e-invariant of a two-cell cone S^{2n} u e^{2n+2k}.

    ``a`` is the top coefficient in ch(xi) = u_{2n} + a.u_{2n+2k} for a
    K-theory class xi restricting to a generator of the bottom cell.
    The class of a in Q/Z is independent of the choice of xi; the
    canonical representative in [0, 1) is returned.
    """
    if n < 1:
        raise ValueError("cell degree index n must be >= 1, got %d" % n)
    if k < 1:
        raise ValueError("stem degree k must be >= 1, got %d" % k)
    return mod1(Fraction(a))


@dataclass(frozen=True)
class ConeData:
    """K-theory of the cone of a map S^{2r-1} -> X, X evenly generated.

    ``base_ranks[i-1]`` is the rank of H^{2i}(X); the extended lattice
    lives on those coordinates followed by one u-coordinate for the
    attached 2r-cell.  Built through `make_cone`, which enforces the
    invariants (restriction onto X equals a full K-lattice, u-axis
    intersection exactly Z.u, rank one above the base).
    """

    base_ranks: tuple
    cell_degree: int
    lattice: Lattice

    @property
    def d(self):
        return len(self.base_ranks)

    @property
    def r(self):
        return self.cell_degree // 2

    @property
    def base_ambient(self):
        return sum(self.base_ranks)

    def base_klattice(self) -> KLattice:
        labels = []
        for i, ni in enumerate(self.base_ranks, start=1):
            labels.extend("b%d_%d" % (2 * i, j + 1) for j in range(ni))
        return make_klattice(self.base_ranks, labels,
                             self.lattice.project_prefix(self.base_ambient))


def make_cone(base_ranks, cell_degree, rows, admissible_index=None) -> ConeData:
    base_ranks = tuple(int(x) for x in base_ranks)
    if any(x < 0 for x in base_ranks):
        raise MalformedConeError("negative rank in base degrees %r" % (base_ranks,))
    if cell_degree <= 0 or cell_degree % 2:
        raise MalformedConeError("cell degree must be a positive even integer, got %r"
                                 % (cell_degree,))
    nx = sum(base_ranks)
    lattice = Lattice.from_rows(nx + 1, [tuple(Fraction(x) for x in row) for row in rows])
    if lattice.rank != nx + 1:
        raise MalformedConeError("extended lattice has rank %d, expected %d"
                                 % (lattice.rank, nx + 1))
    cone = ConeData(base_ranks=base_ranks, cell_degree=int(cell_degree), lattice=lattice)
    try:
        base = cone.base_klattice()
    except FullnessFailureError as exc:
        raise MalformedConeError("restriction onto the base is not a K-lattice: %s" % exc)
    if lattice.vanishing_prefix(nx) != Lattice.standard(1):
        raise MalformedConeError("classes supported on the new cell are not exactly Z.u")
    # Full rank in canonical form puts pivot k in column k, so the base
    # lattice's canonical rows are prefixes of the first nx extended rows.
    frows = lattice.fraction_rows()
    assert base.lattice.fraction_rows() == tuple(r[:nx] for r in frows[:nx])
    if admissible_index is not None:
        from .ktheory import admissible_basis
        got = [(el.degree, el.index) for el in admissible_basis(base).elements]
        want = [tuple(int(x) for x in pair) for pair in admissible_index]
        if got != want:
            raise MalformedConeError("declared admissible index order %r, computed %r"
                                     % (want, got))
    return cone


@dataclass(frozen=True)
class ReportRow:
    degree: int      # i: the basis element sits in H^{2i}(X)
    index: int       # j: position within that degree
    raw: Fraction    # u-coordinate of the chosen lift
    top_flag: bool   # 2i is the top degree of X and r > d

    @property
    def value(self):
        return mod1(self.raw)


@dataclass(frozen=True)
class EInvariantReport:
    """Generalized e-invariants e[i][j] of a cone, one row per basis
    element of the base; raw u-coordinates plus canonical mod-1 classes."""

    cell_degree: int
    base_top: int
    rows: tuple

    def entry(self, i, j) -> ReportRow:
        for row in self.rows:
            if row.degree == i and row.index == j:
                return row
        raise KeyError((i, j))

    def flagged(self):
        return tuple(row for row in self.rows if row.top_flag)


def generalized_e(cone: ConeData) -> EInvariantReport:
    """u-coordinates of the canonical lifts of the admissible basis.

    The lift of xi^i_j is computed by solving for xi^i_j over the base
    lattice's canonical basis and re-running the same combination over
    the extended rows; the u-axis invariant makes the answer unique up
    to Z, so the mod-1 column of the report is canonical.
    """
    from .ktheory import admissible_basis
    base = cone.base_klattice()
    basis = admissible_basis(base)
    nx = cone.base_ambient
    frows = cone.lattice.fraction_rows()
    rows = []
    for el in basis.elements:
        coords = base.lattice.solve_coords(el.row)
        if coords is None:
            raise MalformedConeError("admissible element %d_%d escaped the base lattice"
                                     % (el.degree, el.index))
        u = sum((c * frows[k][nx] for k, c in enumerate(coords)), Fraction(0))
        rows.append(ReportRow(degree=el.degree, index=el.index, raw=u,
                              top_flag=(el.degree == cone.d and cone.r > cone.d)))
    return EInvariantReport(cell_degree=cone.cell_degree, base_top=cone.d,
                            rows=tuple(rows))


def skeleton_consistency(cone: ConeData, k: int) -> bool:
    """Cross-check of the full report against the 2k-skeleton model.

    Dropping the base coordinates above degree 2k (keeping u) models f
    composed into the skeleton; the truncated cone must itself satisfy
    the cone invariants (NotDeformable otherwise), and then its report
    must reproduce the rows i <= k of the full report mod 1.
    """
    if not 0 <= k <= cone.d:
        raise ValueError("skeleton index %d outside 0..%d" % (k, cone.d))
    t = sum(cone.base_ranks[:k])
    frows = cone.lattice.fraction_rows()
    nx = cone.base_ambient
    truncated_rows = [row[:t] + (row[nx],) for row in frows]
    try:
        small = make_cone(cone.base_ranks[:k], cone.cell_degree, truncated_rows)
    except MalformedConeError as exc:
        raise NotDeformableError(
            "no cone model on the %d-skeleton: %s" % (2 * k, exc))
    full = generalized_e(cone)
    part = generalized_e(small)
    want = [(row.degree, row.index, row.value) for row in full.rows if row.degree <= k]
    got = [(row.degree, row.index, row.value) for row in part.rows]
    return want == got


# --- the p-local criterion ---------------------------------------------------

CERTIFIED_TRIVIAL = "CertifiedTrivial"
CERTIFIED_NONTRIVIAL = "CertifiedNontrivial"
INCONCLUSIVE = "Inconclusive"

RANGE_EXCEEDED = "RangeExceeded"
UNFLAGGED_ONLY = "UnflaggedOnly"


@dataclass(frozen=True)
class TrivialityVerdict:
    status: str
    p: int
    d: int
    bound: int          # p^2 - 2, the range of the triviality criterion
    reason: str
    witness: tuple = None   # ((i, j), entry) for nontriviality; None otherwise

    def __bool__(self):
        return self.status != INCONCLUSIVE


def p_local_triviality(rep: EInvariantReport, p: int, d: int) -> TrivialityVerdict:
    """Decide p-local stable triviality of the map behind the report.

    Trivial: every entry p-integral and d <= p^2 - 2.  Nontrivial: a
    flagged top-degree entry with p in the denominator, within the
    injectivity range k = r - d <= p^2 - 3.  The whole criterion needs
    d <= p^2 - 2; outside that the verdict is Inconclusive/RangeExceeded
    whatever the entries say.  p = 2 is rejected.
    """
    _require_odd_prime(p)
    if d < 0:
        raise ValueError("top degree index d must be >= 0, got %d" % d)
    bound = p * p - 2
    if d > bound:
        return TrivialityVerdict(status=INCONCLUSIVE, p=p, d=d, bound=bound,
                                 reason="%s: d = %d exceeds p^2 - 2 = %d"
                                 % (RANGE_EXCEEDED, d, bound))
    bad = [row for row in rep.rows if row.value.denominator % p == 0]
    if not bad:
        return TrivialityVerdict(
            status=CERTIFIED_TRIVIAL, p=p, d=d, bound=bound,
            reason="all %d entries are %d-integral and d = %d <= %d"
            % (len(rep.rows), p, d, bound))
    flagged_bad = [row for row in bad if row.top_flag]
    if flagged_bad:
        k = rep.cell_degree // 2 - d
        if k <= p * p - 3:
            w = flagged_bad[0]
            return TrivialityVerdict(
                status=CERTIFIED_NONTRIVIAL, p=p, d=d, bound=bound,
                reason="entry e[%d][%d] = %s has denominator divisible by %d "
                       "in the injective range k = %d <= p^2 - 3 = %d"
                % (w.degree, w.index, w.value, p, k, p * p - 3),
                witness=((w.degree, w.index), w.value))
        return TrivialityVerdict(
            status=INCONCLUSIVE, p=p, d=d, bound=bound,
            reason="%s: stem degree k = %d exceeds p^2 - 3 = %d"
            % (RANGE_EXCEEDED, k, p * p - 3))
    return TrivialityVerdict(
        status=INCONCLUSIVE, p=p, d=d, bound=bound,
        reason="%s: only entries below the top degree fail %d-integrality"
        % (UNFLAGGED_ONLY, p))


# --- realizability of ring isomorphisms --------------------------------------

@dataclass(frozen=True)
class RealizabilityCore:
    """Prime-independent part of a realizability certificate: the lift
    and the per-skeleton evidence, computed once per pair."""

    kiso: KIso
    skeleton_evidence: tuple   # (2k, det of skeleton map, det of quotient map)


@dataclass(frozen=True)
class RealizabilityCertificate:
    """Record that a lifted ring isomorphism satisfies every hypothesis
    of the p-local realization theorem: the lift exists, restricts to an
    isomorphism on each skeleton and each quotient, and the dimension is
    within 2p^2 - 4 so each induction step's triviality criterion is in
    range.  Asserts applicability only; no stable map is constructed."""

    p: int
    dim: int
    bound: int            # 2p^2 - 4
    kiso: KIso
    skeleton_evidence: tuple


def _induced_det(src: KLattice, dst: KLattice, theta_bar: RingMap, shift: int):
    """Determinant of the map the degree-wise action of theta_bar induces
    between two derived K-lattices whose blocks start at degree 2(shift+1);
    LiftFailed if an image row escapes the target lattice."""
    offs = src.block_offsets()
    matrix = []
    for row in src.lattice.fraction_rows():
        img = []
        for i in range(1, src.n + 1):
            blk = row[offs[i - 1]:offs[i]]
            mat = theta_bar.matrices[shift + i]
            width = dst.ranks[i - 1]
            part = [Fraction(0)] * width
            for a, c in enumerate(blk):
                if c:
                    for t, x in enumerate(mat[a]):
                        part[t] += c * x
            img.extend(part)
        coords = dst.lattice.solve_coords(img)
        if coords is None:
            raise LiftFailedError("skeleton image escapes the target lattice")
        matrix.append(coords)
    return det_int(matrix)


def realizability_core(src, dst, theta_bar: RingMap) -> RealizabilityCore:
    """Lift theta_bar and verify the skeleton hypotheses; prime-free."""
    ring1, k1 = src
    ring2, k2 = dst
    try:
        kiso = lift_iso(src, dst, theta_bar)
    except (NotIsoError, KernelMismatchError) as exc:
        raise LiftFailedError(str(exc))
    evidence = []
    for k in range(1, ring1.n):
        cap = 2 * k
        ds = _induced_det(skeleton_truncate(k1, cap), skeleton_truncate(k2, cap),
                          theta_bar, 0)
        dq = _induced_det(quotient_data(k1, cap), quotient_data(k2, cap),
                          theta_bar, k)
        if abs(ds) != 1 or abs(dq) != 1:
            raise LiftFailedError(
                "restriction to the %d-skeleton is not an isomorphism" % cap)
        evidence.append((cap, ds, dq))
    return RealizabilityCore(kiso=kiso, skeleton_evidence=tuple(evidence))


def realizability_check(src, dst, theta_bar: RingMap, p: int,
                        core: RealizabilityCore = None) -> RealizabilityCertificate:
    """Certify that the realization theorem applies to theta_bar at p.

    ``core`` carries the prime-independent work when checking several
    primes for one pair.  DimensionMismatch for unequal top degrees;
    RangeExceeded when dim > 2p^2 - 4; LiftFailed from the lift itself.
    """
    _require_odd_prime(p)
    ring1, _ = src
    ring2, _ = dst
    if ring1.n != ring2.n:
        raise DimensionMismatchError("dimensions 2*%d and 2*%d differ"
                                     % (ring1.n, ring2.n))
    dim = 2 * ring1.n
    bound = 2 * p * p - 4
    if dim > bound:
        raise RangeExceededError(
            "dimension %d exceeds 2p^2 - 4 = %d at p = %d" % (dim, bound, p),
            dim=dim, bound=bound)
    if core is None:
        core = realizability_core(src, dst, theta_bar)
    return RealizabilityCertificate(p=p, dim=dim, bound=bound, kiso=core.kiso,
                                    skeleton_evidence=core.skeleton_evidence)
