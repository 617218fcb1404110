from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtor.errors import DimensionMismatchError
from qtor.linalg import (
    Lattice,
    det_int,
    frac_rank,
    hnf_with_transform,
    int_inverse_unimodular,
    integer_hnf,
    is_unimodular,
    kernel_lattice,
    mat_mul,
    sublattice_inclusion,
)

F = Fraction


def test_hnf_identity():
    assert integer_hnf([(1, 0), (0, 1)], 2) == ((1, 0), (0, 1))


def test_hnf_redundant_row():
    assert integer_hnf([(2, 0), (0, 3), (2, 3)], 2) == ((2, 0), (0, 3))


def test_hnf_canonical_reduction():
    # entries above a pivot end up in [0, pivot)
    h = integer_hnf([(1, 5), (0, 3)], 2)
    assert h == ((1, 2), (0, 3))


def test_hnf_transform_reconstructs_rows():
    rows = [(6, 4, 2), (2, 0, 1), (4, 4, 1)]
    h, t, k = hnf_with_transform(rows, 3)
    for i, trow in enumerate(t):
        built = [0, 0, 0]
        for c, row in zip(trow, rows):
            built = [x + c * y for x, y in zip(built, row)]
        assert tuple(built) == h[i]
    for z in k:
        combo = [0, 0, 0]
        for c, row in zip(z, rows):
            combo = [x + c * y for x, y in zip(combo, row)]
        assert combo == [0, 0, 0]
    assert len(h) + len(k) == len(rows)


def test_det_int():
    assert det_int([(2, 4), (1, 3)]) == 2
    assert det_int([(0, 1), (1, 0)]) == -1
    assert det_int([]) == 1
    assert det_int([(1, 2, 3), (4, 5, 6), (7, 8, 9)]) == 0


def test_is_unimodular_and_inverse():
    m = ((1, 2), (0, 1))
    assert is_unimodular(m)
    inv = int_inverse_unimodular(m)
    assert mat_mul(m, inv) == ((1, 0), (0, 1))
    assert not is_unimodular(((2, 0), (0, 1)))


def test_lattice_from_rational_rows():
    lat = Lattice.from_rows(2, [(F(1), F(1, 2)), (F(0), F(1))])
    assert lat.member((F(2), F(1)))
    assert lat.member((F(3), F(3, 2)))
    assert not lat.member((F(1), F(0)))
    assert lat.member((F(0), F(0)))


def test_lattice_membership_parity():
    lat = Lattice.from_rows(2, [(2, 0), (0, 3)])
    assert not lat.member((1, 0))
    assert lat.member((2, 3))


def test_member_dimension_check():
    lat = Lattice.standard(2)
    with pytest.raises(DimensionMismatchError):
        lat.member((1,))


def test_solve_coords_roundtrip():
    lat = Lattice.from_rows(2, [(F(1), F(1, 2)), (F(0), F(1))])
    coords = lat.solve_coords((F(3), F(5, 2)))
    rows = lat.fraction_rows()
    built = [sum(c * r[i] for c, r in zip(coords, rows)) for i in range(2)]
    assert built == [F(3), F(5, 2)]
    assert lat.solve_coords((F(1, 2), F(0))) is None


def test_kernel_lattice_examples():
    assert kernel_lattice([(1,), (1,)], 1).fraction_rows() == ((F(1), F(-1)),)
    assert kernel_lattice([(1, 0), (0, 1)], 2).rank == 0
    k = kernel_lattice([(2,), (-1,), (0,)], 1)
    assert k.fraction_rows() == ((F(1), F(2), F(0)), (F(0), F(0), F(1)))


def test_kernel_of_rational_rows():
    k = kernel_lattice([(F(1, 2),), (F(1, 4),)], 1)
    # z1/2 + z2/4 = 0 over the integers: exactly multiples of (1, -2)
    assert k.fraction_rows() == ((F(1), F(-2)),)


def test_sublattice_inclusion():
    z2 = Lattice.standard(2)
    two = Lattice.from_rows(2, [(2, 0), (0, 2)])
    zero = Lattice.from_rows(2, [])
    assert sublattice_inclusion(zero, two)
    assert sublattice_inclusion(two, z2)
    assert not sublattice_inclusion(z2, two)
    with pytest.raises(DimensionMismatchError):
        sublattice_inclusion(z2, Lattice.standard(3))


def test_project_and_vanishing_prefix():
    lat = Lattice.from_rows(3, [(F(1), F(1, 2), F(1, 12)), (0, 1, 0), (0, 0, 1)])
    proj = lat.project_prefix(2)
    assert proj.fraction_rows() == ((F(1), F(1, 2)), (F(0), F(1)))
    van = lat.vanishing_prefix(2)
    assert van.fraction_rows() == ((F(1),),)
    assert lat.project_prefix(0).ambient == 0
    assert lat.vanishing_prefix(0) == lat


def test_frac_rank():
    assert frac_rank([(F(1, 2), F(1)), (F(1), F(2))]) == 1
    assert frac_rank([]) == 0


small_ints = st.integers(min_value=-9, max_value=9)


@st.composite
def int_matrices(draw):
    cols = draw(st.integers(min_value=1, max_value=4))
    nrows = draw(st.integers(min_value=1, max_value=5))
    return [tuple(draw(small_ints) for _ in range(cols)) for _ in range(nrows)], cols


@given(int_matrices(), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_hnf_invariant_under_row_shuffle(data, rng):
    rows, cols = data
    shuffled = list(rows)
    rng.shuffle(shuffled)
    assert integer_hnf(rows, cols) == integer_hnf(shuffled, cols)


@given(int_matrices(), st.data())
@settings(max_examples=60, deadline=None)
def test_hnf_invariant_under_row_operations(data, draw):
    rows, cols = data
    if len(rows) < 2:
        return
    i = draw.draw(st.integers(min_value=0, max_value=len(rows) - 1))
    j = draw.draw(st.integers(min_value=0, max_value=len(rows) - 1))
    c = draw.draw(st.integers(min_value=-3, max_value=3))
    if i == j:
        return
    modified = list(rows)
    modified[i] = tuple(a + c * b for a, b in zip(rows[i], rows[j]))
    assert integer_hnf(rows, cols) == integer_hnf(modified, cols)


@given(int_matrices())
@settings(max_examples=60, deadline=None)
def test_hnf_contains_original_rows(data):
    rows, cols = data
    lat = Lattice.from_rows(cols, rows)
    for row in rows:
        assert lat.member(row)


@given(int_matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_rank_count(data):
    rows, cols = data
    k = kernel_lattice(rows, cols)
    assert k.rank + frac_rank(rows) == len(rows)
    for z in k.fraction_rows():
        combo = [sum(c * row[t] for c, row in zip(z, rows)) for t in range(cols)]
        assert all(x == 0 for x in combo)


@given(int_matrices())
@settings(max_examples=40, deadline=None)
def test_lattice_canonical_idempotent(data):
    rows, cols = data
    lat = Lattice.from_rows(cols, rows)
    again = Lattice.from_rows(cols, lat.fraction_rows())
    assert lat == again
