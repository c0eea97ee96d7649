import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syzkit.errors import BudgetError, InputError
from syzkit.koszul import (
    BettiTable,
    KoszulCocycle,
    betti_table,
    cocycle_class_is_zero,
    coboundary_rows,
    exterior_basis,
    k_p1_cocycle_basis,
    koszul_dim,
    koszul_matrix,
    koszul_rank,
    koszul_space_dim,
    linear_strand_dim_from_ideal,
    minimal_free_resolution,
    removal_sign,
    res_map,
)
from syzkit.polyring import EmbeddedScheme, Ideal, PolyRing


@pytest.fixture(scope="module")
def tc():
    ring = PolyRing(32003, ("x0", "x1", "x2", "x3"))
    ideal = Ideal(ring, ["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"])
    return EmbeddedScheme(ideal, labels={"kind": "rnc", "degree": 3})


@pytest.fixture(scope="module")
def ci23():
    # complete intersection of a quadric and a cubic in P^3 (canonical genus 4)
    ring = PolyRing(32003, ("x0", "x1", "x2", "x3"))
    ideal = Ideal(
        ring,
        [
            "x0*x3 - x1*x2",
            "x0^3 + x1^3 + x2^3 + x3^3 + x0*x1*x2",
        ],
    )
    return EmbeddedScheme(ideal, labels={"kind": "ci", "degrees": (2, 3)})


def test_removal_sign():
    assert removal_sign(0) == -1
    assert removal_sign(1) == 1
    assert removal_sign(2) == -1


def test_exterior_basis():
    assert exterior_basis(4, 0) == ((),)
    assert exterior_basis(4, 2)[0] == (0, 1)
    assert len(exterior_basis(4, 2)) == 6
    assert exterior_basis(4, 5) == ()
    assert exterior_basis(4, -1) == ()


def test_koszul_matrix_shapes_twisted_cubic(tc):
    m = koszul_matrix(tc, 1, 1)
    assert m.shape == (7, 16)
    # a 7x16 matrix over a field cannot exceed rank 7; here it is exactly 7
    assert koszul_rank(tc, 1, 1) == 7
    assert koszul_rank(tc, 2, 0) == 6
    assert koszul_dim(tc, 1, 1) == 16 - 7 - 6


def test_differential_squares_to_zero(tc):
    for p, q in [(2, 0), (2, 1), (3, 0), (1, 1), (3, 1)]:
        first = koszul_matrix(tc, p, q)
        second = koszul_matrix(tc, p - 1, q + 1)
        if first.size and second.size:
            assert not np.any((second @ first) % tc.char)


def test_betti_table_twisted_cubic(tc):
    table = betti_table(tc, 3, 2)
    assert table.entry(0, 0) == 1
    assert table.entry(1, 1) == 3
    assert table.entry(2, 1) == 2
    total = sum(table.entries.values())
    assert total == 1 + 3 + 2  # everything else vanishes
    text = table.text()
    assert "total:" in text and "3" in text


def test_betti_table_json_round_trip(tc):
    table = betti_table(tc, 3, 2)
    blob = json.dumps(table.to_json_dict(), sort_keys=True)
    again = BettiTable.from_json_dict(json.loads(blob))
    assert again.entries == table.entries
    assert (again.char, again.pmax, again.qmax) == (table.char, table.pmax, table.qmax)


def test_strand_matches_ideal_route(tc, ci23):
    for scheme in (tc, ci23):
        for p in range(1, 4):
            assert linear_strand_dim_from_ideal(scheme, p) == koszul_dim(scheme, p, 1)


def test_budget_error(tc):
    with pytest.raises(BudgetError) as err:
        koszul_matrix(tc, 1, 1, entry_budget=10)
    assert "7 x 16" in str(err.value)
    with pytest.raises(BudgetError):
        betti_table(tc, 3, 2, entry_budget=10)


def test_cocycle_basis_twisted_cubic(tc):
    classes = k_p1_cocycle_basis(tc, 1)
    assert len(classes) == 3
    for c in classes:
        assert c.is_cocycle()
        assert not cocycle_class_is_zero(c)
    # determinism
    again = k_p1_cocycle_basis(tc, 1)
    assert [c.coeffs for c in again] == [c.coeffs for c in classes]
    classes2 = k_p1_cocycle_basis(tc, 2)
    assert len(classes2) == 2


def test_cocycle_vector_round_trip(tc):
    for c in k_p1_cocycle_basis(tc, 2):
        v = c.to_vector()
        again = KoszulCocycle.from_vector(tc, 2, v)
        assert again.coeffs == c.coeffs


def test_cocycle_json_round_trip(tc):
    c = k_p1_cocycle_basis(tc, 1)[0]
    blob = json.dumps(c.to_json_dict(), sort_keys=True)
    again = KoszulCocycle.from_json_dict(tc, json.loads(blob))
    assert again.coeffs == c.coeffs and again.p == 1
    with pytest.raises(InputError):
        KoszulCocycle.from_json_dict(tc, {"p": 1})


def test_cocycle_validation(tc):
    with pytest.raises(InputError):
        KoszulCocycle(tc, 1, {((0, 1), 0): 1})  # wedge length != p
    with pytest.raises(InputError):
        KoszulCocycle(tc, 2, {((1, 0), 0): 1})  # not increasing
    with pytest.raises(InputError):
        KoszulCocycle(tc, 2, {((0, 9), 0): 1})  # out of range
    with pytest.raises(InputError):
        KoszulCocycle(tc, 0, {})


def test_coboundaries_are_cocycles_with_zero_class(tc):
    rows = coboundary_rows(tc, 2)
    assert rows.shape[0] == 4  # Lambda^3 of a 4-dim space
    for row in rows:
        c = KoszulCocycle.from_vector(tc, 2, row)
        assert c.is_cocycle()
        assert cocycle_class_is_zero(c)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_perturbation_keeps_class(seed):
    ring = PolyRing(32003, ("x0", "x1", "x2", "x3"))
    ideal = Ideal(ring, ["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"])
    scheme = EmbeddedScheme(ideal)
    rng = np.random.default_rng(seed)
    alpha = k_p1_cocycle_basis(scheme, 2)[0]
    rows = coboundary_rows(scheme, 2)
    combo = (rng.integers(0, 32003, size=rows.shape[0]) @ rows) % 32003
    beta = KoszulCocycle.from_vector(scheme, 2, combo)
    perturbed = alpha.add(beta)
    assert perturbed.is_cocycle()
    diff = perturbed.add(alpha.scale(-1))
    assert cocycle_class_is_zero(diff)
    assert not cocycle_class_is_zero(perturbed)


def test_res_map(tc):
    sub = EmbeddedScheme(
        Ideal(tc.ring, ["x0*x2 - x1^2", "x0*x3 - x1*x2"]),
        labels={"kind": "partial"},
    )
    alpha = k_p1_cocycle_basis(sub, 1)[0]
    moved = res_map(tc, alpha)
    assert moved.scheme is tc
    assert moved.is_cocycle()
    # the reverse containment fails
    with pytest.raises(InputError):
        res_map(sub, k_p1_cocycle_basis(tc, 1)[0])


# -- minimal free resolution oracle -------------------------------------------


def test_resolution_twisted_cubic(tc):
    res = minimal_free_resolution(tc.ideal, degree_bound=8)
    assert not res.truncated
    assert res.modules == [[0], [2, 2, 2], [3, 3]]
    betti = res.graded_betti()
    assert betti == {(0, 0): 1, (1, 2): 3, (2, 3): 2}
    for p in range(3):
        for q in range(3):
            assert res.strand_entry(p, q) == koszul_dim(tc, p, q)


def test_resolution_complete_intersection(ci23):
    res = minimal_free_resolution(ci23.ideal, degree_bound=8)
    assert not res.truncated
    assert res.modules == [[0], [2, 3], [5]]
    assert res.strand_entry(1, 1) == 1
    assert res.strand_entry(1, 2) == 1
    assert res.strand_entry(2, 3) == 1
    for p in range(3):
        for q in range(4):
            assert res.strand_entry(p, q) == koszul_dim(ci23, p, q)


def test_resolution_zero_ideal():
    ring = PolyRing(32003, ("x0", "x1"))
    res = minimal_free_resolution(Ideal(ring, []))
    assert res.modules == [[0]]
    assert not res.truncated


def test_resolution_truncation_flag(ci23):
    res = minimal_free_resolution(ci23.ideal, degree_bound=4)
    assert res.truncated  # the degree-5 last syzygy is out of range


def test_koszul_space_dim_edges(tc):
    assert koszul_space_dim(tc, -1, 1) == 0
    assert koszul_space_dim(tc, 5, 1) == 0
    assert koszul_space_dim(tc, 2, -1) == 0
    assert koszul_dim(tc, 0, 0) == 1
    assert koszul_dim(tc, 0, 1) == 0
    assert koszul_dim(tc, 3, 1) == 0
