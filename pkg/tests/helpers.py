"""Shared generators for the randomized suites.

Everything takes an explicit random.Random so tests stay reproducible;
seeds are fixed in the test modules.
"""

from itertools import permutations, product

from lamptwist.lattice import IntMatrix
from lamptwist.wreath import FiniteSupportFunction, WreathElement


def elementary_add(k, i, j, c):
    rows = [[int(r == s) for s in range(k)] for r in range(k)]
    rows[i][j] = c
    return IntMatrix(rows)


def random_unimodular(rng, k, max_factors=12):
    """Product of at most max_factors elementary/permutation/sign matrices."""
    m = IntMatrix.identity(k)
    for _ in range(rng.randrange(1, max_factors + 1)):
        kind = rng.choice(["add", "swap", "sign"]) if k > 1 else "sign"
        if kind == "add":
            i, j = rng.sample(range(k), 2)
            m = m * elementary_add(k, i, j, rng.choice([-2, -1, 1, 2]))
        elif kind == "swap":
            i, j = rng.sample(range(k), 2)
            rows = [[int(r == s) for s in range(k)] for r in range(k)]
            rows[i][i] = rows[j][j] = 0
            rows[i][j] = rows[j][i] = 1
            m = m * IntMatrix(rows)
        else:
            i = rng.randrange(k)
            rows = [[int(r == s) for s in range(k)] for r in range(k)]
            rows[i][i] = -1
            m = m * IntMatrix(rows)
    return m


def random_signed_permutation(rng, k):
    perm = list(range(k))
    rng.shuffle(perm)
    rows = [[0] * k for _ in range(k)]
    for i, j in enumerate(perm):
        rows[i][j] = rng.choice([-1, 1])
    return IntMatrix(rows)


def all_signed_permutations(k):
    for perm in permutations(range(k)):
        for signs in product([-1, 1], repeat=k):
            rows = [[0] * k for _ in range(k)]
            for i, (j, s) in enumerate(zip(perm, signs)):
                rows[i][j] = s
            yield IntMatrix(rows)


def random_finite_order_unimodular(rng, k, conjugations=4):
    """Signed permutation conjugated by a random unimodular matrix."""
    p = random_signed_permutation(rng, k)
    u = random_unimodular(rng, k, conjugations)
    return u * p * u.inverse()


def random_function(rng, m, k, max_support=3, box=3):
    entries = []
    for _ in range(rng.randrange(0, max_support + 1)):
        pos = tuple(rng.randrange(-box, box + 1) for _ in range(k))
        entries.append((pos, rng.randrange(1, m)))
    return FiniteSupportFunction(m, entries)


def random_element(rng, m, k, max_support=3, box=3):
    t = tuple(rng.randrange(-box, box + 1) for _ in range(k))
    return WreathElement(random_function(rng, m, k, max_support, box), t)
