import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gausscalc.algebra import (
    DimensionError,
    Multivector,
    basis_blades,
    coefficient_residual,
    commutator,
    contract_left,
    contract_right,
    geometric_product,
    grade_involution,
    grade_projection,
    inner_product,
    norm_squared,
    pseudoscalar,
    reversion,
    scalar_product,
    selftest,
    wedge,
)

E3 = basis_blades(3)
e1, e2, e3, e12, e123 = E3["e1"], E3["e2"], E3["e3"], E3["e12"], E3["e123"]
one = E3["1"]


# squares of magnitudes below ~1e-154 underflow; keep coefficients clear of that
COEFF = st.floats(-3, 3, allow_nan=False).filter(lambda x: x == 0.0 or abs(x) > 1e-100)


def mv_strategy(dim):
    return arrays(np.float64, 1 << dim, elements=COEFF).map(
        lambda c: Multivector(c, dim)
    )


def vec_strategy(dim):
    return arrays(np.float64, dim, elements=COEFF).map(Multivector.vector)


# ---- oracle values ---------------------------------------------------------

def test_geometric_product_basis_rules():
    assert e1 * e1 == one
    assert e1 * e2 == e12
    assert e2 * e1 == -e12
    assert (e1 + e2) * e1 == one - e12


def test_wedge_examples():
    assert (e1 ^ e1) == Multivector.zero(3)
    assert (e1 ^ e2 ^ e3) == pseudoscalar(3)
    assert ((e1 + e2) ^ e2) == e12


def test_contraction_examples():
    assert (e1 << e12) == e2
    assert (e12 << e12) == -one
    assert (e12 << e1) == Multivector.zero(3)
    assert (e12 >> e2) == e1
    assert (e1 >> e12) == Multivector.zero(3)


def test_scalar_and_inner_products():
    assert inner_product(e12, e12) == 1.0
    assert scalar_product(e12, e12) == -1.0
    assert inner_product(e1 + e12, e1) == 1.0
    assert norm_squared(3 * e1 + 4 * e12) == pytest.approx(25.0)


def test_involutions():
    assert reversion(e123) == -e123
    assert grade_involution(e1) == -e1
    assert grade_involution(e12) == e12
    assert reversion(one) == one
    assert ~e12 == -e12


def test_commutator_examples():
    assert commutator(e12, e1) == -e2
    assert commutator(e12, e12) == Multivector.zero(3)


def test_grade_projection_and_pseudoscalar():
    A = one + e1 + e12
    assert grade_projection(A, 1) == e1
    assert pseudoscalar(3) == e123
    assert norm_squared(pseudoscalar(5)) == 1.0
    with pytest.raises(ValueError):
        grade_projection(A, 4)
    with pytest.raises(ValueError):
        grade_projection(A, -1)


def test_blade_constructor_orders_indices():
    assert Multivector.blade(3, 2, 1) == -e12
    assert Multivector.blade(3, 1, 1) == Multivector.scalar(1.0, 3)


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionError):
        geometric_product(e1, Multivector.vector([1.0, 0.0]))
    with pytest.raises(DimensionError):
        wedge(Multivector.zero(4), e1)


def test_construction_validates():
    with pytest.raises(ValueError):
        Multivector([np.nan, 0.0])
    with pytest.raises(ValueError):
        Multivector(np.zeros(3))
    with pytest.raises(ValueError):
        Multivector.zero(13)


def test_grade_set():
    assert (one + e12).grade_set() == frozenset({0, 2})
    assert Multivector.zero(3).grade_set() == frozenset()


def test_equality_is_tolerant_but_not_loose():
    assert e1 + 1e-14 * e2 == e1
    assert not (e1 + 1e-9 * e2 == e1)


# ---- properties ------------------------------------------------------------

@given(st.integers(1, 5).flatmap(lambda d: st.tuples(mv_strategy(d), mv_strategy(d), mv_strategy(d))))
def test_associativity(abc):
    A, B, C = abc
    assert coefficient_residual((A * B) * C, A * (B * C)) < 1e-12


@given(st.integers(1, 5).flatmap(lambda d: st.tuples(vec_strategy(d), mv_strategy(d))))
def test_vector_split(aB):
    a, B = aB
    assert coefficient_residual(a * B, (a << B) + (a ^ B)) < 1e-12


@given(st.integers(1, 4).flatmap(lambda d: st.tuples(mv_strategy(d), mv_strategy(d), mv_strategy(d))))
def test_contraction_adjunction(xab):
    X, A, B = xab
    lhs, rhs = scalar_product(X ^ A, B), scalar_product(X, A << B)
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))
    lhs, rhs = scalar_product(A, B ^ X), scalar_product(A >> B, X)
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))


@given(st.integers(2, 5).flatmap(lambda d: st.tuples(mv_strategy(d), mv_strategy(d))))
def test_bivector_three_term_split(BA):
    B, A = BA
    B = grade_projection(B, 2)
    assert coefficient_residual(B * A, (B << A) + commutator(B, A) + (B ^ A)) < 1e-12


@given(st.integers(1, 6).flatmap(mv_strategy))
def test_norm_positive_definite(A):
    n = norm_squared(A)
    assert n >= 0.0
    assert (n == 0.0) == (not np.any(A.coeffs))


@given(st.integers(1, 5).flatmap(mv_strategy))
def test_involutions_are_involutive(A):
    assert reversion(reversion(A)) == A
    assert grade_involution(grade_involution(A)) == A


@given(st.integers(1, 4).flatmap(lambda d: st.tuples(mv_strategy(d), mv_strategy(d))))
def test_reversion_is_anti_automorphism(AB):
    A, B = AB
    assert coefficient_residual(reversion(A * B), reversion(B) * reversion(A)) < 1e-12


@given(st.integers(1, 5).flatmap(mv_strategy))
def test_grade_projections_sum_to_whole(A):
    total = Multivector.zero(A.dim)
    for r in range(A.dim + 1):
        total = total + grade_projection(A, r)
    assert total == A


@given(st.integers(1, 5).flatmap(lambda d: st.tuples(vec_strategy(d), mv_strategy(d))))
def test_left_right_contraction_relation(aB):
    # a ⌟ B = -(B̂ ⌞ a) and a ∧ B = B̂ ∧ a  (vector a, any B)
    a, B = aB
    assert coefficient_residual(a << B, -(grade_involution(B) >> a)) < 1e-12
    assert coefficient_residual(a ^ B, grade_involution(B) ^ a) < 1e-12


@given(st.integers(1, 5).flatmap(lambda d: st.tuples(mv_strategy(d), mv_strategy(d))))
def test_commutator_antisymmetric(AB):
    A, B = AB
    assert coefficient_residual(commutator(A, B), -commutator(B, A)) < 1e-12


def test_selftest_passes_at_full_size():
    results = selftest(n_cases=500)
    assert [name for name, _, _ in results] == [
        "associativity", "vector-split", "contraction-adjunction", "bivector-split", "positive-norm",
    ]
    for name, worst, ok in results:
        assert ok, (name, worst)


def test_functions_agree_with_operators(rng):
    A = Multivector.random(4, rng)
    B = Multivector.random(4, rng)
    assert geometric_product(A, B) == A * B
    assert wedge(A, B) == (A ^ B)
    assert contract_left(A, B) == (A << B)
    assert contract_right(A, B) == (A >> B)
    assert math.isclose(inner_product(A, A), A.norm() ** 2)
