"""Field arithmetic and exact linear algebra."""

import random
from fractions import Fraction

import pytest

from mcpair.fields import (
    GF,
    QQ,
    Matrix,
    Subspace,
    coordinates,
    field_by_name,
    kernel_basis,
    quotient_representatives,
    row_space_basis,
    solve,
    vec_is_zero,
)


def test_rational_basics():
    assert QQ.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert QQ.inv(Fraction(-2, 3)) == Fraction(-3, 2)
    assert QQ.parse("3/4") == Fraction(3, 4)
    assert QQ.parse("-7") == Fraction(-7)
    assert QQ.format(Fraction(3, 2)) == "3/2"
    assert QQ.format(Fraction(5)) == "5"


def test_prime_field_basics():
    F5 = GF(5)
    assert F5.add(3, 4) == 2
    assert F5.inv(2) == 3
    assert F5.parse("1/2") == 3
    assert F5.from_rational(Fraction(-1, 2)) == 2
    with pytest.raises(ZeroDivisionError):
        F5.inv(0)
    with pytest.raises(ValueError):
        GF(6)


def test_field_by_name():
    assert field_by_name("Q") is QQ
    assert field_by_name("F7") is GF(7)
    assert field_by_name("F7") is field_by_name("F7")
    with pytest.raises(ValueError):
        field_by_name("R")


def test_prime_field_agrees_with_rationals_mod_p():
    # random rational expressions with p-unit denominators, reduced mod p
    F7 = GF(7)
    rng = random.Random(0)
    for _ in range(200):
        a = Fraction(rng.randint(-20, 20), rng.choice([1, 2, 3, 4, 5, 6]))
        b = Fraction(rng.randint(-20, 20), rng.choice([1, 2, 3, 4, 5, 6]))
        fa, fb = F7.from_rational(a), F7.from_rational(b)
        assert F7.from_rational(a + b) == F7.add(fa, fb)
        assert F7.from_rational(a * b) == F7.mul(fa, fb)
        if b != 0 and b.numerator % 7 != 0:
            assert F7.from_rational(a / b) == F7.div(fa, fb)


def mat(field, rows):
    return Matrix(field, [[field.from_int(x) for x in r] for r in rows], len(rows[0]) if rows else 0)


def test_kernel_trivial_cases():
    z = Matrix.zero(QQ, 2, 2)
    assert kernel_basis(z) == [(1, 0), (0, 1)]
    assert kernel_basis(Matrix.identity(QQ, 3)) == []


def test_kernel_rank_one():
    m = mat(QQ, [[1, 2], [2, 4]])
    basis = kernel_basis(m)
    assert len(basis) == 1
    (v,) = basis
    # proportional to (-2, 1)
    assert v[0] * 1 == v[1] * -2
    assert not vec_is_zero(QQ, v)


def test_solve_identity():
    m = Matrix.identity(QQ, 3)
    b = (Fraction(5), Fraction(-1), Fraction(2, 3))
    x, ker = solve(m, b)
    assert x == b and ker == []


def test_solve_underdetermined():
    m = mat(QQ, [[1, 1]])
    sol = solve(m, (Fraction(2),))
    assert sol is not None
    x, ker = sol
    assert x[0] + x[1] == 2
    assert len(ker) == 1
    assert ker[0][0] == -ker[0][1] != 0


def test_solve_inconsistent():
    m = mat(QQ, [[0]])
    assert solve(m, (Fraction(1),)) is None


@pytest.mark.parametrize("field", [QQ, GF(3), GF(101)])
def test_rank_nullity_random(field):
    rng = random.Random(17)
    for _ in range(40):
        nr, nc = rng.randint(1, 6), rng.randint(1, 6)
        m = Matrix(field, [[field.from_int(rng.randint(-4, 4)) for _ in range(nc)] for _ in range(nr)], nc)
        ker = kernel_basis(m)
        assert m.rank() + len(ker) == nc
        for v in ker:
            assert vec_is_zero(field, m.apply(v))
        # kernel vectors are independent
        assert len(row_space_basis(field, ker, nc)) == len(ker)


@pytest.mark.parametrize("field", [QQ, GF(5)])
def test_solve_random_consistency(field):
    rng = random.Random(23)
    for _ in range(60):
        nr, nc = rng.randint(1, 5), rng.randint(1, 5)
        m = Matrix(field, [[field.from_int(rng.randint(-3, 3)) for _ in range(nc)] for _ in range(nr)], nc)
        target = tuple(field.from_int(rng.randint(-3, 3)) for _ in range(nc))
        b = m.apply(target)
        sol = solve(m, b)
        assert sol is not None
        x, _ = sol
        assert m.apply(x) == b


def test_quotient_representatives():
    assert quotient_representatives(QQ, [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))], 2) == []
    reps = quotient_representatives(QQ, [], 2)
    assert len(reps) == 2
    one = Fraction(1)
    reps = quotient_representatives(QQ, [(one, one, Fraction(0))], 3)
    assert len(reps) == 2
    span = Subspace(QQ, 3, [(one, one, Fraction(0))] + reps)
    assert span.dim == 3


def test_subspace_reduce_membership():
    one = Fraction(1)
    s = Subspace(QQ, 3, [(one, one, Fraction(0))])
    assert s.contains((Fraction(2), Fraction(2), Fraction(0)))
    assert not s.contains((one, Fraction(0), Fraction(0)))
    # reduce is idempotent
    v = (Fraction(3), one, one)
    assert s.reduce(s.reduce(v)) == s.reduce(v)


def test_coordinates():
    one = Fraction(1)
    basis = [(one, Fraction(0)), (one, one)]
    c = coordinates(QQ, basis, (Fraction(3), Fraction(2)))
    assert c == (one, Fraction(2))
    assert coordinates(QQ, [(one, Fraction(0))], (Fraction(0), one)) is None
    assert coordinates(QQ, [], (Fraction(0), Fraction(0))) == ()


def test_matmul_and_apply_agree():
    F3 = GF(3)
    a = mat(F3, [[1, 2, 0], [0, 1, 1]])
    b = mat(F3, [[1, 1], [2, 0], [0, 2]])
    prod = a @ b
    for j in range(2):
        assert prod.column(j) == a.apply(b.column(j))


def test_matrix_immutable():
    m = Matrix.identity(QQ, 2)
    with pytest.raises(AttributeError):
        m.rows = ()
