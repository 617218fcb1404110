"""Per-prime stable rigidity verdicts for pairs of quasitoric manifolds.

Pipeline: compute both cohomology rings, find (or re-verify a supplied)
ring isomorphism, lift it to the K-lattices, and report for each prime
whether the p-local realization theorem certifies a stable homotopy
equivalence.  An odd prime is certified exactly when an isomorphism
exists, its lift verifies, and dim <= 2p^2 - 4; p = 2 goes through the
separate low-dimensional route (dimension 2 is a sphere; dimension 4
needs the ring isomorphism plus mod-2 evidence for Sq^2 compatibility,
which a degree-preserving ring isomorphism supplies automatically).

Since all large primes satisfy the bound, the verdict also reports the
closed-form threshold `all_primes_from`: every prime at or above it is
certified, so a finite report covers the infinite statement.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product

from .cohomology import (
    GradedRing,
    RingMap,
    cohomology,
    invert_ring_map,
    mod2_square_rank,
    ring_map_from_degree2,
    verify_ring_map,
)
from .einvariant import is_prime, realizability_check, realizability_core
from .errors import (
    BoundTooLargeError,
    LiftFailedError,
    NotIsoError,
    RangeExceededError,
)
from .ktheory import chern_image
from .linalg import det_int
from .manifold import ValidatedManifold

DEFAULT_SEARCH_CAP = 10_000_000
DEFAULT_PRIME_CAP = 97

BETTI_MISMATCH = "BettiMismatch"
EXHAUSTED_BOUND = "ExhaustedBound"

CERTIFIED = "Certified"
OUT_OF_RANGE = "OutOfRange"
NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class IsoCertificate:
    """A ring isomorphism together with its verification trace."""

    matrix: tuple            # degree-2 generator matrix, row convention
    ring_map: RingMap
    relations_checked: int   # minimal non-faces whose images were tested
    degree_dets: tuple       # det of the induced matrix in each degree

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NoneFound:
    reason: str
    bound: int = None

    def __bool__(self):
        return False


def _search_cap(explicit=None):
    if explicit is not None:
        return explicit
    env = os.environ.get("QTOR_SEARCH_CAP")
    if env:
        return int(env)
    return DEFAULT_SEARCH_CAP


def _candidate_values(bound):
    """0, 1, -1, 2, -2, ...: small entries first, identity ahead of its
    negative, so searches return the tame representative."""
    vals = [0]
    for v in range(1, bound + 1):
        vals.extend((v, -v))
    return vals


def _certificate(f: RingMap, q, src: GradedRing) -> IsoCertificate:
    check = verify_ring_map(f)
    if not check:
        return None
    dets = tuple(det_int(f.matrices[i]) for i in range(1, src.n + 1))
    return IsoCertificate(matrix=tuple(tuple(r) for r in q), ring_map=f,
                          relations_checked=len(src.nonfaces or ()),
                          degree_dets=dets)


def find_ring_iso(a: GradedRing, b: GradedRing, bound: int, cap: int = None):
    """Exhaustive search for a ring isomorphism a -> b over degree-2
    matrices with entries in [-bound, bound].

    Any isomorphism of these rings is determined by a unimodular matrix
    in degree 2, so the search space is complete up to the bound.  The
    first acceptor in the documented enumeration order is returned; the
    order puts smaller entries first, making certificates reproducible.
    BoundTooLarge guards against runaway spaces (cap override:
    QTOR_SEARCH_CAP or the ``cap`` argument).
    """
    if bound < 0:
        raise ValueError("bound must be >= 0, got %d" % bound)
    if a.n != b.n or any(a.rank(i) != b.rank(i) for i in range(1, a.n + 1)):
        return NoneFound(reason=BETTI_MISMATCH, bound=bound)
    ell = a.rank(1)
    cap = _search_cap(cap)
    total = (2 * bound + 1) ** (ell * ell)
    if total > cap:
        raise BoundTooLargeError(total, cap)
    vals = _candidate_values(bound)
    for flat in product(vals, repeat=ell * ell):
        q = tuple(flat[r * ell:(r + 1) * ell] for r in range(ell))
        if abs(det_int(q)) != 1:
            continue
        f = ring_map_from_degree2(a, b, q)
        if f is None:
            continue
        cert = _certificate(f, q, a)
        if cert is not None:
            return cert
    return NoneFound(reason=EXHAUSTED_BOUND, bound=bound)


def verify_supplied_iso(a: GradedRing, b: GradedRing, q) -> IsoCertificate:
    """Re-verify a user-supplied degree-2 matrix; never trusted as-is."""
    q = tuple(tuple(int(x) for x in row) for row in q)
    if len(q) != a.rank(1) or any(len(r) != b.rank(1) for r in q):
        raise NotIsoError("supplied matrix is %dx%d, expected %dx%d"
                          % (len(q), len(q[0]) if q else 0, a.rank(1), b.rank(1)))
    f = ring_map_from_degree2(a, b, q)
    if f is None:
        raise NotIsoError("supplied matrix does not preserve the relations")
    cert = _certificate(f, q, a)
    if cert is None:
        raise NotIsoError("supplied matrix induces a non-invertible map")
    return cert


@dataclass(frozen=True)
class PrimeStatus:
    p: int
    status: str
    reason: str


@dataclass(frozen=True)
class P2Status:
    status: str
    reason: str
    sq2_evidence: tuple = None   # (nonzero squares in a, in b) when dim = 4


@dataclass(frozen=True)
class RigidityVerdict:
    dim: int
    iso_status: str              # "found" | "supplied" | "none"
    certificate: IsoCertificate = None
    none_reason: str = None
    primes: tuple = ()
    all_primes_from: int = None
    p2: P2Status = None

    def prime(self, p):
        for entry in self.primes:
            if entry.p == p:
                return entry
        raise KeyError(p)


def least_certifying_prime(n: int) -> int:
    """Least prime p with 2n <= 2p^2 - 4; every prime from here up is in
    range, which is what `all_primes_from` reports."""
    p = 2
    while not (is_prime(p) and p * p >= n + 2):
        p += 1
    return p


def _odd_primes_upto(cap):
    return [p for p in range(3, cap + 1) if is_prime(p)]


def _p2_status(a: GradedRing, b: GradedRing) -> P2Status:
    n = a.n
    if n == 1:
        return P2Status(status=CERTIFIED,
                        reason="dimension 2: both manifolds are the sphere S^2")
    if n == 2:
        sa = mod2_square_rank(a)
        sb = mod2_square_rank(b)
        return P2Status(
            status=CERTIFIED,
            reason="dimension 4: ring isomorphism plus Sq^2 action "
                   "(determined by mod-2 squares, matched by any ring isomorphism)",
            sq2_evidence=(sa.nonzero_count, sb.nonzero_count))
    return P2Status(status=NOT_APPLICABLE,
                    reason="dimension %d > 4: the 2-primary criterion covers "
                           "only dimensions 2 and 4" % (2 * n))


def verdict(a: ValidatedManifold, b: ValidatedManifold, bound: int = 3,
            prime_cap: int = DEFAULT_PRIME_CAP, supplied_iso=None,
            search_cap: int = None) -> RigidityVerdict:
    """Full pipeline: rings, isomorphism, lift, per-prime certificates.

    With ``supplied_iso`` the search is skipped and the matrix is
    re-verified instead.  A lift failure is prime-independent and
    propagates as an error rather than degrading single primes.
    """
    ra = cohomology(a)
    rb = cohomology(b)
    dim = a.dim
    if supplied_iso is not None:
        cert = verify_supplied_iso(ra, rb, supplied_iso)
        iso_status = "supplied"
    else:
        found = find_ring_iso(ra, rb, bound, cap=search_cap)
        if not found:
            return RigidityVerdict(
                dim=dim, iso_status="none", none_reason=found.reason,
                primes=tuple(PrimeStatus(p=p, status=NOT_APPLICABLE,
                                         reason="no ring isomorphism (%s)" % found.reason)
                             for p in _odd_primes_upto(prime_cap)),
                p2=P2Status(status=NOT_APPLICABLE,
                            reason="no ring isomorphism (%s)" % found.reason))
        cert = found
        iso_status = "found"

    src = (ra, chern_image(ra))
    dst = (rb, chern_image(rb))
    core = realizability_core(src, dst, cert.ring_map)

    primes = []
    for p in _odd_primes_upto(prime_cap):
        try:
            realizability_check(src, dst, cert.ring_map, p, core=core)
        except RangeExceededError as exc:
            primes.append(PrimeStatus(p=p, status=OUT_OF_RANGE, reason=str(exc)))
            continue
        primes.append(PrimeStatus(
            p=p, status=CERTIFIED,
            reason="dim %d <= 2p^2 - 4 = %d; lift verified" % (dim, 2 * p * p - 4)))
    return RigidityVerdict(
        dim=dim, iso_status=iso_status, certificate=cert,
        primes=tuple(primes),
        all_primes_from=least_certifying_prime(a.n),
        p2=_p2_status(ra, rb))


def inverse_certificate(cert: IsoCertificate, a: GradedRing, b: GradedRing) -> IsoCertificate:
    """Certificate for the inverse isomorphism; used by symmetry checks."""
    inv = invert_ring_map(cert.ring_map)
    return verify_supplied_iso(b, a, inv.matrices[1])
