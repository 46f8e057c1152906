import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kzfusion.errors import (
    DimensionMismatchError,
    ExtensionMismatchError,
    NonRationalError,
)
from kzfusion.exact import (
    ExactMatrix,
    ExactScalar,
    in_positive_multiples,
    parse_scalar,
    scalar,
    solve_linear,
    eigenspace,
)


# -- independent oracle: Cramer's rule via Laplace determinants -------------

def laplace_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * laplace_det(minor)
        total += term if j % 2 == 0 else -term
    return total


def cramer_solve(rows, rhs):
    d = laplace_det(rows)
    assert d != 0
    out = []
    for i in range(len(rows)):
        cols = [[r[j] if j != i else rhs[k] for j, _ in enumerate(r)]
                for k, r in enumerate(rows)]
        out.append(laplace_det(cols) / d)
    return out


def test_identity_solve():
    sol = solve_linear(ExactMatrix.identity(3), [1, 2, 3])
    assert sol.consistent
    assert sol.particular == (scalar(1), scalar(2), scalar(3))
    assert sol.kernel == []


def test_rank_one_kernel():
    m = ExactMatrix([[1, 2], [2, 4]])
    sol = m.solve([0, 0])
    assert sol.consistent
    assert sol.kernel == [(scalar(-2), scalar(1))]


def test_solve_matches_cramer_oracle():
    rng = random.Random(7)
    for _ in range(5):
        while True:
            rows = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                     for _ in range(4)] for _ in range(4)]
            if laplace_det(rows) != 0:
                break
        rhs = [Fraction(rng.randint(-5, 5)) for _ in range(4)]
        expected = cramer_solve(rows, rhs)
        sol = solve_linear(ExactMatrix(rows), rhs)
        assert sol.consistent and sol.kernel == []
        assert sol.particular == tuple(scalar(x) for x in expected)


def test_inconsistent_system_is_empty():
    m = ExactMatrix([[1, 2], [2, 4]])
    sol = m.solve([1, 0])
    assert not sol.consistent
    assert sol.particular is None and sol.kernel == []


def test_eigenspace_diagonal():
    m = ExactMatrix([[2, 0], [0, 3]])
    assert eigenspace(m, 2) == [(scalar(1), scalar(0))]
    assert eigenspace(m, 5) == []
    with pytest.raises(DimensionMismatchError):
        eigenspace(ExactMatrix([[1, 2, 3]]), 1)


def test_in_positive_multiples():
    assert in_positive_multiples(scalar(6), scalar(6))
    assert not in_positive_multiples(scalar(0), scalar(Fraction(3, 2)))
    assert not in_positive_multiples(scalar(Fraction(1, 2)), scalar(Fraction(3, 2)))
    # negative step: members are negative
    assert in_positive_multiples(scalar(-3), scalar(Fraction(-3, 2)))
    assert not in_positive_multiples(scalar(3), scalar(Fraction(-3, 2)))
    with pytest.raises(ValueError):
        in_positive_multiples(scalar(1), scalar(0))
    with pytest.raises(NonRationalError):
        in_positive_multiples(ExactScalar(0, 1, 2), scalar(1))


# -- quadratic extension --------------------------------------------------

def test_sqrt_canonicalization():
    assert ExactScalar(0, 1, Fraction(9, 4)) == scalar(Fraction(3, 2))
    assert ExactScalar(0, 1, 8) == ExactScalar(0, 2, 2)
    assert ExactScalar(0, 1, Fraction(1, 2)) == ExactScalar(0, Fraction(1, 2), 2)
    x = ExactScalar(1, 1, 2)
    assert x * ExactScalar(1, -1, 2) == scalar(-1)
    assert (x / x) == scalar(1)
    assert ExactScalar(0, 1, Fraction(1, 4)) == scalar(Fraction(1, 2))


def test_extension_mixing_rejected():
    with pytest.raises(ExtensionMismatchError):
        ExactScalar(0, 1, 2) + ExactScalar(0, 1, 3)
    # plain rationals coerce into any extension
    assert ExactScalar(0, 1, 2) + scalar(1) == ExactScalar(1, 1, 2)


def test_ordering_real_quadratic():
    root2 = ExactScalar(0, 1, 2)
    assert root2 > 1
    assert root2 < scalar(Fraction(3, 2))
    assert ExactScalar(1, -1, 2) < 0
    with pytest.raises(NonRationalError):
        _ = ExactScalar(0, 1, -3) > 0


def test_parse_scalar_forms():
    for text in ("3", "-1/2", "7/3", "sqrt(2)", "-sqrt(2)", "1/2*sqrt(2)",
                 "-3/8+1/2*sqrt(2)", "1/8-1/2*sqrt(2)", "2+sqrt(3)"):
        v = parse_scalar(text)
        assert parse_scalar(str(v)) == v
    with pytest.raises(ValueError):
        parse_scalar("2sqrt(3)")
    with pytest.raises(ValueError):
        parse_scalar("banana")


small_fracs = st.fractions(min_value=-10, max_value=10, max_denominator=6)


@st.composite
def quad_scalars(draw, d):
    return ExactScalar(draw(small_fracs), draw(small_fracs), d)


@given(st.integers(2, 7).filter(lambda d: d not in (4,)).flatmap(
    lambda d: st.tuples(quad_scalars(d), quad_scalars(d), quad_scalars(d))))
def test_field_axioms(triple):
    x, y, z = triple
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    if x:
        assert x * x.inverse() == scalar(1)


@given(st.integers(0, 10_000))
def test_solve_substitute_roundtrip(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 4), rng.randint(1, 4)
    rows = [[Fraction(rng.randint(-4, 4)) for _ in range(m)] for _ in range(n)]
    rhs = [Fraction(rng.randint(-4, 4)) for _ in range(n)]
    mat = ExactMatrix(rows)
    sol = mat.solve(rhs)
    if sol.consistent:
        assert mat @ sol.particular == tuple(scalar(b) for b in rhs)
        for k in sol.kernel:
            assert all(not c for c in (mat @ k))


def test_eigenspace_vectors_satisfy_equation():
    m = ExactMatrix([[8, 4], [4, 8]])
    for mu in (12, 4):
        for v in m.eigenspace(mu):
            assert m @ v == tuple(scalar(mu) * c for c in v)


def test_matrix_shape_errors():
    with pytest.raises(DimensionMismatchError):
        ExactMatrix([[1, 2], [3]])
    with pytest.raises(DimensionMismatchError):
        ExactMatrix([[1, 2]]) @ ExactMatrix([[1, 2]])
    with pytest.raises(DimensionMismatchError):
        ExactMatrix([[1, 2]]).solve([1, 2])


def test_empty_matrix_bookkeeping():
    z = ExactMatrix.zeros(0, 3)
    assert z.shape == (0, 3)
    assert z.transpose().shape == (3, 0)
    assert (ExactMatrix.zeros(2, 0) @ z).shape == (2, 3)
    assert len(z.kernel_basis()) == 3
