import math
import random
from fractions import Fraction
from itertools import permutations, product

import pytest

from lamptwist.lattice import (
    IntMatrix,
    coset_index,
    coset_representatives,
    det,
    fixed_characters,
    kernel_rank,
    matrix_order,
    point_period,
    realized_periods,
    smith_normal_form,
    solve,
    torsion_order_bound,
    vec_add,
)

from helpers import random_finite_order_unimodular, random_unimodular

M3 = IntMatrix([[0, 1], [-1, -1]])
I2 = IntMatrix.identity(2)


def det_by_permutation_expansion(m):
    """Independent oracle: sum over permutations with parity signs."""
    k = m.k
    total = 0
    for perm in permutations(range(k)):
        inversions = sum(
            1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j]
        )
        term = (-1) ** inversions
        for i in range(k):
            term *= m.rows[i][perm[i]]
        total += term
    return total


# ---------------------------------------------------------------------------
# determinant


def test_det_examples():
    assert det(IntMatrix([[1]])) == 1
    assert det(IntMatrix([[0, 1], [-1, -1]])) == 1  # cofactor expansion by hand
    assert det(I2 - M3) == 3


def test_det_matches_permutation_expansion():
    rng = random.Random(101)
    for _ in range(60):
        k = rng.randrange(1, 5)
        m = IntMatrix(
            [[rng.randrange(-5, 6) for _ in range(k)] for _ in range(k)]
        )
        assert det(m) == det_by_permutation_expansion(m)


def test_det_large_entries_exact():
    big = 10 ** 30
    m = IntMatrix([[big, 1], [1, big]])
    assert det(m) == big * big - 1


# ---------------------------------------------------------------------------
# Smith normal form


def test_snf_examples():
    assert smith_normal_form(I2).diagonal == (1, 1)
    # manual row/column reduction: [[1,-1],[1,2]] -> diag(1, 3)
    assert smith_normal_form(IntMatrix([[1, -1], [1, 2]])).diagonal == (1, 3)
    assert smith_normal_form(IntMatrix([[2, 0], [0, 4]])).diagonal == (2, 4)


def test_snf_recomposition_and_chain():
    rng = random.Random(7)
    for _ in range(40):
        k = rng.randrange(1, 5)
        m = IntMatrix(
            [[rng.randrange(-6, 7) for _ in range(k)] for _ in range(k)]
        )
        dec = smith_normal_form(m)
        assert dec.U * m * dec.V == dec.D
        assert abs(det(dec.U)) == 1 and abs(det(dec.V)) == 1
        assert dec.U * dec.U_inv == IntMatrix.identity(k)
        assert dec.V * dec.V_inv == IntMatrix.identity(k)
        diag = dec.diagonal
        assert all(d >= 0 for d in diag)
        for a, b in zip(diag, diag[1:]):
            if a == 0:
                assert b == 0
            else:
                assert b % a == 0
        # off-diagonal must vanish
        for i in range(k):
            for j in range(k):
                if i != j:
                    assert dec.D.rows[i][j] == 0


def test_snf_deterministic():
    m = IntMatrix([[4, 6, 2], [6, 4, 8], [2, 8, 4]])
    assert smith_normal_form(m) == smith_normal_form(m)


# ---------------------------------------------------------------------------
# torsion orders


def test_torsion_order_bound_known_values():
    assert [torsion_order_bound(k) for k in range(1, 9)] == [2, 6, 6, 12, 12, 30, 30, 60]


def test_matrix_order_examples():
    for k in (1, 2, 3):
        assert matrix_order(-IntMatrix.identity(k)) == 2
    assert matrix_order(M3) == 3
    assert matrix_order(IntMatrix([[2, 1], [1, 1]])) is None


def test_matrix_order_rejects_non_unimodular():
    with pytest.raises(ValueError):
        matrix_order(IntMatrix([[2, 0], [0, 1]]))


def test_matrix_order_is_minimal():
    rng = random.Random(23)
    ident = IntMatrix.identity(3)
    for _ in range(20):
        a = random_finite_order_unimodular(rng, 3)
        r = matrix_order(a)
        assert a ** r == ident
        for d in range(1, r):
            if r % d == 0:
                assert a ** d != ident


# ---------------------------------------------------------------------------
# kernels and periods


def test_kernel_rank_examples():
    assert kernel_rank(IntMatrix([[0, 0], [0, 0]])) == 2
    assert kernel_rank(IntMatrix([[-2, 0], [0, -2]])) == 0
    assert kernel_rank(IntMatrix([[0, 1], [0, 0]])) == 1


def brute_force_periods(a, radius=5):
    """Oracle: exact periods of every point in the max-norm ball."""
    order = matrix_order(a)
    seen = set()
    for point in product(range(-radius, radius + 1), repeat=a.k):
        cur = a.apply(point)
        for r in range(1, order + 1):
            if cur == point:
                seen.add(r)
                break
            cur = a.apply(cur)
    return seen


def test_realized_periods_examples():
    assert realized_periods(-I2).periods == {1, 2}
    assert realized_periods(M3).periods == {1, 3}
    block = IntMatrix.block_diagonal(M3, -I2)
    assert realized_periods(block).periods == {1, 2, 3, 6}


def test_realized_periods_match_bruteforce():
    for a, radius in [(-I2, 3), (M3, 5), (IntMatrix.block_diagonal(M3, -I2), 2)]:
        assert realized_periods(a).periods == brute_force_periods(a, radius)


def test_realized_period_witnesses_are_exact():
    rng = random.Random(31)
    mats = [M3, -I2, IntMatrix.block_diagonal(M3, -I2)]
    mats += [random_finite_order_unimodular(rng, 3) for _ in range(10)]
    for a in mats:
        report = realized_periods(a)
        assert report.order == matrix_order(a)
        assert 1 in report.periods and report.witness(1) == (0,) * a.k
        for r, w in report.realized:
            assert r == 1 or point_period(a, w) == r
            assert report.order % r == 0


def test_realized_periods_infinite_order():
    a = IntMatrix.block_diagonal(IntMatrix([[-1]]), IntMatrix([[2, 1], [1, 1]]))
    report = realized_periods(a)
    assert report.order is None
    assert report.periods == {1, 2}
    assert report.basis_periods == (2, None, None)


def test_point_period_examples():
    assert point_period(M3, (0, 0)) == 1
    assert point_period(-I2, (1, 0)) == 2
    assert point_period(M3, (1, 0)) == 3  # (1,0) -> (0,-1) -> (-1,1) -> (1,0)
    with pytest.raises(ValueError):
        point_period(IntMatrix([[2, 1], [1, 1]]), (1, 0))


# ---------------------------------------------------------------------------
# fixed characters and coset enumeration


def test_fixed_characters_examples():
    assert fixed_characters(IntMatrix([[-1]])) == (
        (Fraction(0),),
        (Fraction(1, 2),),
    )
    assert len(fixed_characters(M3)) == 3
    with pytest.raises(ValueError):
        fixed_characters(I2)


def test_fixed_characters_fix_equation():
    rng = random.Random(47)
    for _ in range(15):
        k = rng.randrange(1, 4)
        a = random_finite_order_unimodular(rng, k)
        if det(IntMatrix.identity(k) - a) == 0:
            continue
        at = a.transpose()
        for chi in fixed_characters(a):
            assert all(0 <= c < 1 for c in chi)
            image = tuple(
                sum(Fraction(at.rows[i][j]) * chi[j] for j in range(k)) % 1
                for i in range(k)
            )
            assert image == chi


def test_coset_representatives_examples():
    assert coset_representatives(IntMatrix([[2]])) == ((0,), (1,))
    assert coset_representatives(I2) == ((0, 0),)
    reps = coset_representatives(I2 - M3)
    assert len(reps) == 3
    for i, x in enumerate(reps):
        for y in reps[i + 1 :]:
            diff = tuple(a - b for a, b in zip(x, y))
            assert solve(I2 - M3, diff) is None  # pairwise non-congruent
    with pytest.raises(ValueError):
        coset_representatives(I2 - I2)


def test_count_coincidences():
    # |fixed characters| = |cosets of (I-A)Z^k| = |det(I-A)|
    rng = random.Random(59)
    for _ in range(20):
        k = rng.randrange(1, 4)
        a = random_finite_order_unimodular(rng, k)
        d = det(IntMatrix.identity(k) - a)
        if d == 0:
            continue
        assert len(fixed_characters(a)) == abs(d)
        assert len(coset_representatives(IntMatrix.identity(k) - a)) == abs(d)


def test_coset_index_classifies():
    m = I2 - M3
    reps = coset_representatives(m)
    keys = {coset_index(m, r) for r in reps}
    assert len(keys) == len(reps)
    shifted = vec_add(reps[1], m.apply((3, -2)))
    assert coset_index(m, shifted) == coset_index(m, reps[1])


def test_solve_system():
    assert solve(I2 - M3, (3, 3)) is not None
    assert solve(I2 - M3, (1, 0)) is None
    singular = IntMatrix([[1, 1], [1, 1]])
    assert solve(singular, (2, 2)) is not None
    assert solve(singular, (1, 0)) is None


# ---------------------------------------------------------------------------
# structural properties used downstream


def test_power_first_column_gcd_is_one():
    rng = random.Random(61)
    for _ in range(25):
        k = rng.choice([2, 3])
        a = random_unimodular(rng, k)
        power = IntMatrix.identity(k)
        for _ in range(12):
            power = power * a
            col = [power.rows[i][0] for i in range(k)]
            assert math.gcd(*col) == 1


def test_axis_orbit_intersection_small():
    rng = random.Random(67)
    radius = 8
    for _ in range(10):
        a = random_unimodular(rng, 2)
        for x in range(1, radius + 1):
            axis_hits = {(x, 0)}
            forward = (x, 0)
            backward = (x, 0)
            inv = a.inverse()
            for _ in range(60):
                forward = a.apply(forward)
                backward = inv.apply(backward)
                for p in (forward, backward):
                    if max(abs(c) for c in p) <= radius and p[1] == 0:
                        axis_hits.add(p)
            assert axis_hits <= {(x, 0), (-x, 0)}
