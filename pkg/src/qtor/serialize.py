"""JSON writers and readers for every value the CLI moves around.

Conventions: rationals are always "num/den" strings (floats never
appear); writers emit plain dict/list/str/int structures whose key
order is made irrelevant by sorted-key dumping in the CLI; every reader
re-validates through the producing module's constructor so a hand-edited
file cannot smuggle in an inconsistent value.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .cohomology import GradedRing
from .einvariant import ConeData, EInvariantReport, TrivialityVerdict, make_cone
from .errors import ParseError
from .ktheory import AdmissibleBasis, KLattice, admissible_basis, make_klattice
from .linalg import Lattice
from .manifold import ValidatedManifold, manifold_from_dict
from .rigidity import IsoCertificate, RigidityVerdict


def frac_str(x) -> str:
    f = Fraction(x)
    return "%d/%d" % (f.numerator, f.denominator)


def parse_frac(s, field="") -> Fraction:
    if isinstance(s, int) and not isinstance(s, bool):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ParseError("bad rational %r" % (s,), field=field)
    raise ParseError("rational must be a \"num/den\" string, got %r" % (s,), field=field)


def _require(obj, key, typ, where):
    if key not in obj:
        raise ParseError("missing key %r" % key, field="%s.%s" % (where, key))
    val = obj[key]
    if typ is int and isinstance(val, bool):
        raise ParseError("expected integer at %r" % key, field="%s.%s" % (where, key))
    if not isinstance(val, typ):
        raise ParseError("expected %s at %r" % (typ.__name__, key),
                         field="%s.%s" % (where, key))
    return val


# --- manifolds ---------------------------------------------------------------

def manifold_to_dict(v: ValidatedManifold) -> dict:
    return {
        "m": v.m,
        "n": v.n,
        "maximal_faces": [list(f) for f in v.data.maximal_faces],
        "lambda": [list(row) for row in v.data.lam],
    }


def validation_summary(v: ValidatedManifold) -> dict:
    return {
        "ok": True,
        "m": v.m,
        "n": v.n,
        "dim": v.dim,
        "f_vector": list(v.f_vector),
        "h_vector": list(v.h_vector),
    }


# --- cohomology rings --------------------------------------------------------

def ring_to_dict(ring: GradedRing) -> dict:
    tables = []
    for (i, j) in sorted(ring.tables):
        tables.append({
            "i": i,
            "j": j,
            "products": [[list(cell) for cell in row] for row in ring.tables[(i, j)]],
        })
    return {
        "n": ring.n,
        "ranks": list(ring.ranks),
        "generators": list(ring.generators),
        "bases": [[list(e) for e in ring.bases[i]] for i in range(ring.n + 1)],
        "basis_labels": [list(ring.labels(i)) for i in range(ring.n + 1)],
        "tables": tables,
        "pairing": [[int(x) for x in row]
                    for row in ring.pairing_matrix(1)] if ring.n >= 2 else None,
    }


def ring_from_dict(obj: dict) -> GradedRing:
    where = "ring"
    n = _require(obj, "n", int, where)
    ranks = tuple(_require(obj, "ranks", list, where))
    generators = tuple(_require(obj, "generators", list, where))
    bases_raw = _require(obj, "bases", list, where)
    if len(ranks) != n + 1 or len(bases_raw) != n + 1:
        raise ParseError("ranks/bases must have length n + 1", field="ring.ranks")
    bases = tuple(tuple(tuple(int(e) for e in mono) for mono in deg) for deg in bases_raw)
    tables = {}
    for entry in _require(obj, "tables", list, where):
        i = _require(entry, "i", int, "ring.tables")
        j = _require(entry, "j", int, "ring.tables")
        prods = _require(entry, "products", list, "ring.tables")
        tables[(i, j)] = tuple(tuple(tuple(int(c) for c in cell) for cell in row)
                               for row in prods)
    ring = GradedRing(n=n, ranks=tuple(int(r) for r in ranks),
                      generators=tuple(int(g) for g in generators),
                      bases=bases, tables=tables)
    for i in range(n + 1):
        if len(ring.bases[i]) != ring.ranks[i]:
            raise ParseError("degree %d basis length disagrees with rank" % i,
                             field="ring.bases")
    return ring


# --- K-lattices and admissible bases ----------------------------------------

def klattice_to_dict(kl: KLattice) -> dict:
    gens = None
    if kl.gens is not None:
        gens = [{"exponents": list(a), "row": [frac_str(x) for x in row]}
                for a, row in kl.gens]
    return {
        "ranks": list(kl.ranks),
        "labels": list(kl.labels),
        "rows": [[frac_str(x) for x in row] for row in kl.lattice.fraction_rows()],
        "generators": gens,
    }


def klattice_from_dict(obj: dict) -> KLattice:
    where = "klattice"
    ranks = [int(r) for r in _require(obj, "ranks", list, where)]
    labels = [str(s) for s in _require(obj, "labels", list, where)]
    rows = [[parse_frac(x, field="klattice.rows") for x in row]
            for row in _require(obj, "rows", list, where)]
    ambient = sum(ranks)
    if len(labels) != ambient:
        raise ParseError("expected %d labels" % ambient, field="klattice.labels")
    lattice = Lattice.from_rows(ambient, rows)
    gens = None
    if obj.get("generators") is not None:
        gens = tuple(
            (tuple(int(e) for e in _require(g, "exponents", list, "klattice.generators")),
             tuple(parse_frac(x, field="klattice.generators.row")
                   for x in _require(g, "row", list, "klattice.generators")))
            for g in obj["generators"])
    return make_klattice(ranks, labels, lattice, gens)


def admissible_to_dict(basis: AdmissibleBasis) -> dict:
    return {
        "ranks": list(basis.ranks),
        "elements": [{"degree": el.degree, "index": el.index,
                      "row": [frac_str(x) for x in el.row]}
                     for el in basis.elements],
    }


# --- cones and e-invariant reports -------------------------------------------

def cone_to_dict(cone: ConeData) -> dict:
    base = cone.base_klattice()
    order = [[el.degree, el.index] for el in admissible_basis(base).elements]
    return {
        "base_degrees": list(cone.base_ranks),
        "cell_degree": cone.cell_degree,
        "lattice_rows": [[frac_str(x) for x in row]
                         for row in cone.lattice.fraction_rows()],
        "admissible_index": order,
    }


def cone_from_dict(obj: dict) -> ConeData:
    where = "cone"
    base = _require(obj, "base_degrees", list, where)
    cell = _require(obj, "cell_degree", int, where)
    rows = [[parse_frac(x, field="cone.lattice_rows") for x in row]
            for row in _require(obj, "lattice_rows", list, where)]
    idx = obj.get("admissible_index")
    return make_cone(base, cell, rows, admissible_index=idx)


def load_cone(path) -> ConeData:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError("invalid JSON: %s" % exc, field=str(path))
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object", field=str(path))
    return cone_from_dict(obj)


def report_to_dict(rep: EInvariantReport) -> dict:
    return {
        "cell_degree": rep.cell_degree,
        "base_top": rep.base_top,
        "rows": [{"degree": row.degree, "index": row.index,
                  "raw": frac_str(row.raw), "value": frac_str(row.value),
                  "top_flag": row.top_flag}
                 for row in rep.rows],
    }


def triviality_to_dict(v: TrivialityVerdict) -> dict:
    witness = None
    if v.witness is not None:
        (i, j), val = v.witness
        witness = {"entry": [i, j], "value": frac_str(val)}
    return {
        "status": v.status,
        "p": v.p,
        "d": v.d,
        "bound": v.bound,
        "reason": v.reason,
        "witness": witness,
    }


# --- isomorphisms and verdicts -----------------------------------------------

def iso_to_dict(cert: IsoCertificate, status: str) -> dict:
    return {
        "status": status,
        "matrix": [list(row) for row in cert.matrix],
        "relations_checked": cert.relations_checked,
        "degree_dets": list(cert.degree_dets),
    }


def verdict_to_dict(v: RigidityVerdict) -> dict:
    iso = None
    if v.certificate is not None:
        iso = iso_to_dict(v.certificate, v.iso_status)
    p2 = None
    if v.p2 is not None:
        p2 = {"status": v.p2.status, "reason": v.p2.reason,
              "sq2_evidence": list(v.p2.sq2_evidence) if v.p2.sq2_evidence else None}
    return {
        "dim": v.dim,
        "iso": iso,
        "primes": [{"p": e.p, "status": e.status, "reason": e.reason}
                   for e in v.primes],
        "all_primes_from": v.all_primes_from,
        "p2": p2,
    }


def dumps(obj, pretty=False) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
