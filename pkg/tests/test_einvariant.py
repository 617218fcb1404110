from fractions import Fraction

import pytest

from qtor.cohomology import identity_ring_map, ring_map_from_degree2
from qtor.datafiles import load_bundled_cone
from qtor.einvariant import (
    EInvariantReport,
    ReportRow,
    classical_e,
    generalized_e,
    is_prime,
    make_cone,
    p_local_triviality,
    realizability_check,
    realizability_core,
    skeleton_consistency,
)
from qtor.errors import (
    DimensionMismatchError,
    EvenPrimeError,
    LiftFailedError,
    MalformedConeError,
    NotDeformableError,
    RangeExceededError,
)
from qtor.ktheory import KLattice, chern_image
from qtor.manifold import manifold_from_dict, validate

F = Fraction


def test_is_prime():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_classical_e_values():
    assert classical_e(2, 1, F(1, 2)) == F(1, 2)
    assert classical_e(1, 1, 0) == 0
    assert classical_e(2, 2, F(-1, 12)) == F(11, 12)
    assert classical_e(2, 2, F(25, 12)) == F(1, 12)
    with pytest.raises(ValueError):
        classical_e(0, 1, F(1, 2))
    with pytest.raises(ValueError):
        classical_e(1, 0, F(1, 2))


def test_cp2_cone_report():
    rep = generalized_e(load_bundled_cone("cp2_cone.json"))
    row, = rep.rows
    assert (row.degree, row.index) == (1, 1)
    assert row.raw == F(1, 2) and row.value == F(1, 2)
    assert row.top_flag


def test_nu_cone_report():
    rep = generalized_e(load_bundled_cone("nu_cone.json"))
    row, = rep.rows
    assert (row.degree, row.index) == (2, 1)
    assert row.value == F(1, 12)
    assert row.top_flag


def test_threecell_report():
    rep = generalized_e(load_bundled_cone("threecell_cone.json"))
    vals = {(r.degree, r.index): (r.value, r.top_flag) for r in rep.rows}
    assert vals == {(1, 1): (F(1, 12), False), (2, 1): (F(0), True)}


def test_trivial_cone_zero_report(rings):
    # X lattice plus an exactly integral new cell: the cone of a trivial map
    kl = chern_image(rings["cp2"])
    rows = [row + (F(0),) for row in kl.lattice.fraction_rows()]
    rows.append((F(0), F(0), F(1)))
    cone = make_cone((1, 1), 6, rows)
    rep = generalized_e(cone)
    assert all(row.raw == 0 for row in rep.rows)


def test_two_cell_cones_match_classical():
    for name in ("cp2_cone.json", "nu_cone.json"):
        cone = load_bundled_cone(name)
        rep = generalized_e(cone)
        row, = rep.rows
        assert row.top_flag
        assert row.value == classical_e(cone.d, cone.r - cone.d, row.raw)


def test_report_well_defined_across_presentations():
    # generators shifted by multiples of the new-cell class present the
    # same lattice, so the report must not move at all
    base = load_bundled_cone("threecell_cone.json")
    shifted = make_cone((1, 1), 6, [
        (F(1), F(1, 2), F(25, 12)),
        (F(0), F(1), F(-3)),
        (F(0), F(0), F(1))])
    assert shifted.lattice == base.lattice
    assert generalized_e(shifted) == generalized_e(base)


def test_make_cone_rejects_wrong_rank():
    with pytest.raises(MalformedConeError):
        make_cone((1,), 4, [(F(1), F(1, 2))])


def test_make_cone_rejects_fractional_u_axis():
    with pytest.raises(MalformedConeError) as err:
        make_cone((1,), 4, [(F(1), F(0)), (F(0), F(1, 2))])
    assert "new cell" in str(err.value)


def test_make_cone_rejects_non_full_base():
    with pytest.raises(MalformedConeError):
        make_cone((1,), 4, [(F(2), F(0)), (F(0), F(1))])


def test_make_cone_rejects_odd_cell_degree():
    with pytest.raises(MalformedConeError):
        make_cone((1,), 5, [(F(1), F(0)), (F(0), F(1))])


def test_make_cone_checks_declared_index():
    with pytest.raises(MalformedConeError):
        make_cone((1,), 4, [(F(1), F(1, 2)), (F(0), F(1))],
                  admissible_index=[[2, 1]])


def test_skeleton_consistency_full_depth():
    for name in ("cp2_cone.json", "nu_cone.json", "threecell_cone.json"):
        cone = load_bundled_cone(name)
        assert skeleton_consistency(cone, cone.d)


def test_skeleton_consistency_threecell_all_legal():
    cone = load_bundled_cone("threecell_cone.json")
    assert skeleton_consistency(cone, 1)
    assert skeleton_consistency(cone, 2)
    with pytest.raises(NotDeformableError):
        skeleton_consistency(cone, 0)


def test_skeleton_consistency_cp2_cone():
    cone = load_bundled_cone("cp2_cone.json")
    assert skeleton_consistency(cone, 1)


def test_not_deformable_below_attaching_degree():
    # second lift carries a half-integral new-cell coordinate; collapsing
    # degree 4 strands it, so the map cannot land in the 2-skeleton
    cone = make_cone((1, 1), 6, [
        (F(1), F(1, 2), F(1, 12)),
        (F(0), F(1), F(1, 2)),
        (F(0), F(0), F(1))])
    assert skeleton_consistency(cone, 2)
    with pytest.raises(NotDeformableError):
        skeleton_consistency(cone, 1)
    with pytest.raises(ValueError):
        skeleton_consistency(cone, 3)


def _report(entries, cell_degree, base_top):
    rows = tuple(ReportRow(degree=i, index=j, raw=v,
                           top_flag=(i == base_top and cell_degree // 2 > base_top))
                 for (i, j, v) in entries)
    return EInvariantReport(cell_degree=cell_degree, base_top=base_top, rows=rows)


def test_p_local_cp2_cone_trivial():
    rep = generalized_e(load_bundled_cone("cp2_cone.json"))
    for p in (3, 5):
        v = p_local_triviality(rep, p, rep.base_top)
        assert v.status == "CertifiedTrivial"
        assert bool(v)


def test_p_local_nu_cone_nontrivial():
    rep = generalized_e(load_bundled_cone("nu_cone.json"))
    v = p_local_triviality(rep, 3, rep.base_top)
    assert v.status == "CertifiedNontrivial"
    assert v.witness == ((2, 1), F(1, 12))
    # the 5-component of 1/12 is trivial: same report, other prime
    assert p_local_triviality(rep, 5, rep.base_top).status == "CertifiedTrivial"


def test_p_local_range_exceeded_any_report():
    for name in ("cp2_cone.json", "nu_cone.json"):
        rep = generalized_e(load_bundled_cone(name))
        v = p_local_triviality(rep, 3, 8)
        assert v.status == "Inconclusive"
        assert "RangeExceeded" in v.reason
        assert not v


def test_p_local_unflagged_only():
    rep = generalized_e(load_bundled_cone("threecell_cone.json"))
    v = p_local_triviality(rep, 3, rep.base_top)
    assert v.status == "Inconclusive"
    assert "UnflaggedOnly" in v.reason


def test_p_local_stem_out_of_range():
    rep = _report([(1, 1, F(1, 3))], cell_degree=16, base_top=1)
    v = p_local_triviality(rep, 3, 1)
    assert v.status == "Inconclusive"
    assert "RangeExceeded" in v.reason and "k = 7" in v.reason


def test_p_local_rejects_bad_primes():
    rep = generalized_e(load_bundled_cone("cp2_cone.json"))
    with pytest.raises(EvenPrimeError):
        p_local_triviality(rep, 2, 1)
    for bad in (1, 4, 9, -3):
        with pytest.raises(ValueError):
            p_local_triviality(rep, bad, 1)


def test_p_local_trivial_monotone_under_scaling():
    rep = _report([(1, 1, F(1, 2)), (1, 2, F(3, 10))], cell_degree=8, base_top=1)
    assert p_local_triviality(rep, 3, 1).status == "CertifiedTrivial"
    for c in (2, 3, 6, 30):
        scaled = _report([(r.degree, r.index, c * r.raw) for r in rep.rows], 8, 1)
        assert p_local_triviality(scaled, 3, 1).status == "CertifiedTrivial"


def test_realizability_identity_cp2(rings):
    ring = rings["cp2"]
    pair = (ring, chern_image(ring))
    cert = realizability_check(pair, pair, identity_ring_map(ring), 5)
    assert cert.dim == 4 and cert.bound == 46
    assert cert.kiso.is_identity()
    assert all(abs(ds) == 1 and abs(dq) == 1 for _, ds, dq in cert.skeleton_evidence)


def test_realizability_dimension_mismatch(rings):
    r2, r3 = rings["cp2"], rings["cp3"]
    with pytest.raises(DimensionMismatchError):
        realizability_check((r2, chern_image(r2)), (r3, chern_image(r3)),
                            identity_ring_map(r2), 3)


def test_realizability_range_exceeded():
    cp8 = validate(manifold_from_dict({
        "m": 9, "n": 8,
        "maximal_faces": [sorted(set(range(1, 10)) - {v}) for v in range(1, 10)],
        "lambda": [[int(i == j) for j in range(8)] + [-1] for i in range(8)]}))
    from qtor.cohomology import cohomology
    ring = cohomology(cp8)
    pair = (ring, chern_image(ring))
    with pytest.raises(RangeExceededError) as err:
        realizability_check(pair, pair, identity_ring_map(ring), 3)
    assert err.value.dim == 16 and err.value.bound == 14
    assert realizability_check(pair, pair, identity_ring_map(ring), 5).dim == 16


def test_realizability_even_prime(rings):
    ring = rings["cp2"]
    pair = (ring, chern_image(ring))
    with pytest.raises(EvenPrimeError):
        realizability_check(pair, pair, identity_ring_map(ring), 2)


def test_lift_failure_propagates(rings):
    ring = rings["cp2"]
    kl = chern_image(ring)
    doctored = KLattice(ranks=kl.ranks, labels=kl.labels, lattice=kl.lattice,
                        gens=(((1,), (F(0), F(0))), ((2,), (F(0), F(1))),
                              ((1,), (F(1), F(1, 2)))))
    with pytest.raises(LiftFailedError):
        realizability_core((ring, doctored), (ring, kl), identity_ring_map(ring))
