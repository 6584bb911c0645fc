"""Exact integer-matrix and lattice machinery.

Everything in this module runs on plain Python integers, so determinants,
matrix powers, Smith normal forms and kernel computations are exact at any
size.  No floating point is used anywhere: finite-order detection goes
through the Euler-phi admissibility bound for torsion in GL_k(Z) instead of
eigenvalues, and rational data (dual-torus characters) is handled with
``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional

Vector = tuple[int, ...]


# ---------------------------------------------------------------------------
# vectors


def as_vector(coords: Iterable[int]) -> Vector:
    return tuple(int(c) for c in coords)


def zero_vector(k: int) -> Vector:
    return (0,) * k


def unit_vector(k: int, i: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(k))


def vec_add(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise ValueError("vector length mismatch")
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise ValueError("vector length mismatch")
    return tuple(x - y for x, y in zip(a, b))


def vec_neg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def vec_scale(a: Vector, c: int) -> Vector:
    return tuple(c * x for x in a)


# ---------------------------------------------------------------------------
# matrices


class IntMatrix:
    """Immutable square matrix of arbitrary-precision integers."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise ValueError("expected a non-empty square matrix")
        self.rows: tuple[tuple[int, ...], ...] = rows

    @property
    def k(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, k: int) -> "IntMatrix":
        return cls(tuple(unit_vector(k, i) for i in range(k)))

    @classmethod
    def block_diagonal(cls, *blocks: "IntMatrix") -> "IntMatrix":
        k = sum(b.k for b in blocks)
        rows = [[0] * k for _ in range(k)]
        off = 0
        for b in blocks:
            for i in range(b.k):
                for j in range(b.k):
                    rows[off + i][off + j] = b.rows[i][j]
            off += b.k
        return cls(rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    def apply(self, v: Iterable[int]) -> Vector:
        v = as_vector(v)
        if len(v) != self.k:
            raise ValueError("vector length does not match matrix size")
        return tuple(sum(r * x for r, x in zip(row, v)) for row in self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-x for x in row) for row in self.rows))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_size(other)
        return IntMatrix(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_size(other)
        return IntMatrix(
            tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_size(other)
        cols = tuple(zip(*other.rows))
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.rows
            )
        )

    def __pow__(self, n: int) -> "IntMatrix":
        if n < 0:
            raise ValueError("negative powers: invert explicitly with inverse()")
        result = IntMatrix.identity(self.k)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "IntMatrix":
        """Exact inverse; the matrix must be invertible over the integers."""
        k = self.k
        a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)]
             for i, row in enumerate(self.rows)]
        for col in range(k):
            piv = next((r for r in range(col, k) if a[r][col] != 0), None)
            if piv is None:
                raise ValueError("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            inv = 1 / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for r in range(k):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        out = []
        for row in a:
            tail = row[k:]
            if any(x.denominator != 1 for x in tail):
                raise ValueError("inverse is not integral; matrix is not unimodular")
            out.append(tuple(int(x) for x in tail))
        return IntMatrix(out)

    def _check_same_size(self, other: "IntMatrix") -> None:
        if not isinstance(other, IntMatrix) or other.k != self.k:
            raise ValueError("matrix size mismatch")


def det(m: IntMatrix) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    a = [list(row) for row in m.rows]
    n = len(a)
    sign = 1
    prev = 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for r in range(i + 1, n):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
            a[r][i] = 0
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


def is_unimodular(m: IntMatrix) -> bool:
    return abs(det(m)) == 1


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """U * M * V = D with unimodular U, V and divisibility chain on D."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D.rows[i][i] for i in range(self.D.k))


def _identity_lists(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    """Diagonalize over Z, tracking all four transform matrices.

    Pivot rule: smallest nonzero absolute value in the working submatrix,
    scanning rows before columns with lowest indices winning ties.  This
    makes the output deterministic for a given input.
    """
    k = m.k
    a = [list(row) for row in m.rows]
    u, uinv = _identity_lists(k), _identity_lists(k)
    v, vinv = _identity_lists(k), _identity_lists(k)

    def row_swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in range(k):
            uinv[r][i], uinv[r][j] = uinv[r][j], uinv[r][i]

    def row_negate(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in range(k):
            uinv[r][i] = -uinv[r][i]

    def row_add(i: int, j: int, q: int) -> None:
        # row i += q * row j; inverse transform gets the opposite column op
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]
        for r in range(k):
            uinv[r][j] -= q * uinv[r][i]

    def col_swap(i: int, j: int) -> None:
        for r in range(k):
            a[r][i], a[r][j] = a[r][j], a[r][i]
            v[r][i], v[r][j] = v[r][j], v[r][i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def col_add(i: int, j: int, q: int) -> None:
        # col i += q * col j
        for r in range(k):
            a[r][i] += q * a[r][j]
            v[r][i] += q * v[r][j]
        vinv[j] = [x - q * y for x, y in zip(vinv[j], vinv[i])]

    def pick_pivot(s: int) -> Optional[tuple[int, int]]:
        best = None
        for r in range(s, k):
            for c in range(s, k):
                x = a[r][c]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), r, c)
        return None if best is None else (best[1], best[2])

    for s in range(k):
        while True:
            piv = pick_pivot(s)
            if piv is None:
                break
            pr, pc = piv
            if pr != s:
                row_swap(s, pr)
            if pc != s:
                col_swap(s, pc)
            p = a[s][s]
            dirty = False
            for r in range(s + 1, k):
                if a[r][s]:
                    q = a[r][s] // p
                    if q:
                        row_add(r, s, -q)
                    if a[r][s]:
                        dirty = True
            for c in range(s + 1, k):
                if a[s][c]:
                    q = a[s][c] // p
                    if q:
                        col_add(c, s, -q)
                    if a[s][c]:
                        dirty = True
            if dirty:
                continue
            bad_row = None
            for r in range(s + 1, k):
                if any(a[r][c] % p for c in range(s + 1, k)):
                    bad_row = r
                    break
            if bad_row is not None:
                row_add(s, bad_row, 1)
                continue
            break
        if a[s][s] < 0:
            row_negate(s)

    return SmithDecomposition(
        U=IntMatrix(u),
        D=IntMatrix(a),
        V=IntMatrix(v),
        U_inv=IntMatrix(uinv),
        V_inv=IntMatrix(vinv),
    )


def solve(m: IntMatrix, target: Iterable[int]) -> Optional[Vector]:
    """An integer solution x of M x = target, or None if there is none."""
    dec = smith_normal_form(m)
    rhs = dec.U.apply(target)
    y = []
    for d, b in zip(dec.diagonal, rhs):
        if d == 0:
            if b != 0:
                return None
            y.append(0)
        else:
            if b % d:
                return None
            y.append(b // d)
    return dec.V.apply(y)


def kernel_rank(m: IntMatrix) -> int:
    """Rank over Q of the solution space of M x = 0."""
    return m.k - _rational_rank(m.rows)


def _rational_rank(rows: tuple[tuple[int, ...], ...]) -> int:
    a = [[Fraction(x) for x in row] for row in rows]
    n_rows = len(a)
    n_cols = len(a[0])
    rank = 0
    for col in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for r in range(n_rows):
            if r != rank and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# torsion orders and orbit periods


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def _divisors(n: int) -> tuple[int, ...]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return tuple(out)


@lru_cache(maxsize=None)
def torsion_order_bound(k: int) -> int:
    """Largest finite order of an element of GL_k(Z).

    An order n occurs iff the sum of phi(p^a) over the maximal prime powers
    p^a dividing n is at most k, where a single factor of 2 costs nothing.
    This is classical background, used here so that finite-order detection
    needs no eigenvalue numerics.
    """
    if k < 1:
        raise ValueError("rank must be positive")
    primes = [p for p in range(2, k + 2) if _is_prime(p)]
    best = 1

    def extend(idx: int, budget: int, n: int) -> None:
        nonlocal best
        if n > best:
            best = n
        for i in range(idx, len(primes)):
            p = primes[i]
            q = p
            exponent = 1
            while True:
                cost = 0 if (p == 2 and exponent == 1) else (q // p) * (p - 1)
                if cost > budget:
                    break
                extend(i + 1, budget - cost, n * q)
                q *= p
                exponent += 1

    extend(0, k, 1)
    return best


@lru_cache(maxsize=None)
def matrix_order(a: IntMatrix) -> Optional[int]:
    """Smallest r >= 1 with A^r = identity, or None for infinite order."""
    if not is_unimodular(a):
        raise ValueError("matrix_order requires a unimodular matrix")
    ident = IntMatrix.identity(a.k)
    power = a
    for r in range(1, torsion_order_bound(a.k) + 1):
        if power == ident:
            return r
        power = power * a
    return None


def _bounded_period(a: IntMatrix, x: Vector, bound: int) -> Optional[int]:
    y = a.apply(x)
    for r in range(1, bound + 1):
        if y == x:
            return r
        y = a.apply(y)
    return None


def point_period(a: IntMatrix, x: Iterable[int]) -> int:
    """Least r with A^r x = x.  Defined only for finite-order matrices."""
    order = matrix_order(a)
    if order is None:
        raise ValueError("point_period is undefined for infinite-order matrices")
    x = as_vector(x)
    period = _bounded_period(a, x, order)
    assert period is not None
    return period


@dataclass(frozen=True)
class OrbitReport:
    """Summary of the orbit structure of a unimodular matrix on Z^k.

    ``realized`` lists each exactly-attained period together with a witness
    vector of that exact period; ``basis_periods`` holds the period of each
    standard basis vector (None when its orbit is unbounded).
    """

    order: Optional[int]
    realized: tuple[tuple[int, Vector], ...]
    basis_periods: tuple[Optional[int], ...]

    @property
    def periods(self) -> set[int]:
        return {r for r, _ in self.realized}

    def witness(self, period: int) -> Vector:
        for r, w in self.realized:
            if r == period:
                return w
        raise KeyError(period)


def realized_periods(a: IntMatrix) -> OrbitReport:
    """Exact periods attained by lattice points under A.

    For finite order L the attained periods are the divisors r of L whose
    fixed lattice of A^r is strictly larger than that of every A^(r/q),
    q prime: a saturated sublattice cannot be a finite union of proper
    saturated sublattices, so a rank increase is equivalent to existence of
    an exact-period point.  For infinite order, only periods of standard
    basis vectors are collected and the order is reported as None.
    """
    order = matrix_order(a)
    k = a.k
    bound = order if order is not None else torsion_order_bound(k)
    basis = tuple(_bounded_period(a, unit_vector(k, i), bound) for i in range(k))
    realized: dict[int, Vector] = {1: zero_vector(k)}
    if order is None:
        for i, per in enumerate(basis):
            if per is not None and per not in realized:
                realized[per] = unit_vector(k, i)
        return OrbitReport(None, tuple(sorted(realized.items())), basis)
    ident = IntMatrix.identity(k)
    ranks = {r: kernel_rank(a ** r - ident) for r in _divisors(order)}
    for r in _divisors(order):
        if r == 1:
            continue
        if all(ranks[r // q] < ranks[r] for q in _prime_factors(r)):
            realized[r] = _exact_period_witness(a, r, order)
    return OrbitReport(order, tuple(sorted(realized.items())), basis)


def _exact_period_witness(a: IntMatrix, r: int, order: int) -> Vector:
    k = a.k
    dec = smith_normal_form(a ** r - IntMatrix.identity(k))
    basis = [
        tuple(dec.V.rows[row][c] for row in range(k))
        for c in range(k)
        if dec.diagonal[c] == 0
    ]
    # Combinations along a moment curve avoid the (finitely many) proper
    # saturated sublattices of lower exact period.
    for j in range(1, 4 * len(basis) + 9):
        w = zero_vector(k)
        scale = 1
        for b in basis:
            w = vec_add(w, vec_scale(b, scale))
            scale *= j
        if any(w) and _bounded_period(a, w, order) == r:
            return w
    raise AssertionError("no exact-period witness found; rank test violated")


# ---------------------------------------------------------------------------
# fixed characters and coset enumeration


def fixed_characters(a: IntMatrix) -> tuple[tuple[Fraction, ...], ...]:
    """All characters chi of the k-torus with chi o A = chi.

    Characters are rational vectors modulo 1; the fixed ones solve
    (A^T - I) chi = 0 (mod 1) and are enumerated through the Smith form of
    A^T - I.  Requires det(I - A) != 0, and returns exactly |det(I - A)|
    characters, each with entries in [0, 1).
    """
    k = a.k
    n = a.transpose() - IntMatrix.identity(k)
    if det(n) == 0:
        raise ValueError("infinitely many fixed characters: det(I - A) = 0")
    dec = smith_normal_form(n)
    diag = dec.diagonal
    chars = []
    for combo in product(*(range(d) for d in diag)):
        psi = [Fraction(c, d) for c, d in zip(combo, diag)]
        chi = tuple(
            sum((Fraction(dec.V.rows[row][c]) * psi[c] for c in range(k)), Fraction(0)) % 1
            for row in range(k)
        )
        chars.append(chi)
    chars.sort()
    return tuple(chars)


def coset_representatives(m: IntMatrix) -> tuple[Vector, ...]:
    """One representative per coset of M Z^k in Z^k, |det M| in total.

    Representatives are produced canonically from the Smith form: diagonal
    coordinates 0 <= c_i < d_i mapped back through U^{-1}.
    """
    if det(m) == 0:
        raise ValueError("infinite index: det = 0")
    dec = smith_normal_form(m)
    diag = dec.diagonal
    return tuple(
        dec.U_inv.apply(combo) for combo in product(*(range(d) for d in diag))
    )


def coset_index(m: IntMatrix, x: Iterable[int]) -> tuple[int, ...]:
    """Canonical coordinates of x modulo M Z^k (diagonal residues in Smith form)."""
    dec = smith_normal_form(m)
    ux = dec.U.apply(x)
    return tuple(
        b % d if d else b for d, b in zip(dec.diagonal, ux)
    )
