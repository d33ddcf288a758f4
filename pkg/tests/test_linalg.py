import random

from hypothesis import given, settings
from hypothesis import strategies as st

from modsat import linalg

small_ints = st.integers(min_value=-6, max_value=6)


def matrices(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.integers(1, 4).flatmap(lambda m: matrices(n, m))))
def test_smith_normal_form_is_diagonalization(a):
    d, u, v = linalg.smith_normal_form(a)
    s = linalg.matmul(linalg.matmul(u, a), v)
    for i, row in enumerate(s):
        for j, x in enumerate(row):
            assert x == (d[i] if i == j else 0)
    nonzero = [x for x in d if x]
    assert all(x > 0 for x in nonzero)
    for x, y in zip(nonzero, nonzero[1:]):
        assert y % x == 0
    assert abs(linalg.elementary_divisors(u)[-1]) == 1


def test_snf_known_example():
    # diag(2, 6) after reduction of [[2, 4], [6, 8]] has divisors (2, 4)
    assert linalg.elementary_divisors([[2, 4], [6, 8]]) == [2, 4]
    assert linalg.elementary_divisors([[1, 1], [1, -1]]) == [1, 2]


@settings(max_examples=60, deadline=None)
@given(matrices(3, 4))
def test_integer_kernel(a):
    k = linalg.integer_kernel(a)
    cols = linalg.transpose(k, 0) if k and k[0] else []
    for c in cols:
        assert all(x == 0 for x in linalg.matvec(a, c))
    r = linalg.column_rank(a)
    assert len(cols) == 4 - r


def test_integer_solve_and_inverse():
    a = [[2, 1], [1, 1]]
    inv = linalg.integer_inverse(a)
    assert linalg.matmul(a, inv) == linalg.identity(2)
    assert linalg.integer_solve([[2, 0], [0, 2]], [1, 0]) is None
    assert linalg.integer_solve([[2, 0], [0, 2]], [4, 2]) == (2, 1)


def test_mod_p_helpers():
    rng = random.Random(3)
    for _ in range(30):
        p = rng.choice([2, 3, 5])
        a = [[rng.randrange(p) for _ in range(5)] for _ in range(3)]
        ker = linalg.kernel_mod(a, p, 5)
        assert len(ker) == 5 - linalg.rank_mod(a, p)
        for v in ker:
            assert all(x % p == 0 for x in linalg.matvec(a, v))
        b = linalg.matvec(a, [1, 2, 0, 1, 1])
        x = linalg.solve_mod(a, b, p)
        assert [y % p for y in linalg.matvec(a, x)] == [y % p for y in b]
