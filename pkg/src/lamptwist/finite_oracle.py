"""Ground truth on finite quotients Z_m wr (Z/n)^k.

Reducing lattice positions and translations mod n gives a finite group of
order m^(n^k) * n^k on which everything can be checked by force: twisted
class counts via union-find, irreducible representations via the
little-group construction for an abelian base acted on by the abelian
translation group, and the equality of the two counts (the twisted
Burnside-Frobenius identity for finite groups).

All counting is exact; groups above the element budget raise instead of
sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional

from .lattice import IntMatrix, Vector, as_vector
from .wreath import WreathAutomorphism, WreathElement

DEFAULT_ELEMENT_BUDGET = 200_000

FiniteElement = tuple[tuple[int, ...], tuple[int, ...]]


class BudgetExceededError(RuntimeError):
    """The requested quotient is larger than the configured element budget."""


class FiniteWreathGroup:
    """The quotient Z_m wr (Z/n)^k with canonical element encoding.

    Elements are pairs (f, t): f is a tuple of n^k residues mod m indexed
    by the lexicographically ordered positions of (Z/n)^k, and t is a
    translation tuple mod n.
    """

    def __init__(self, m: int, n: int, k: int):
        if m < 2 or n < 1 or k < 1:
            raise ValueError("need m >= 2, n >= 1, k >= 1")
        self.m, self.n, self.k = m, n, k
        self.positions: tuple[Vector, ...] = tuple(product(range(n), repeat=k))
        self.pos_index = {p: i for i, p in enumerate(self.positions)}
        self.size = m ** len(self.positions) * n ** k
        self._trans_perms: dict[Vector, tuple[int, ...]] = {}

    def __repr__(self) -> str:
        return f"FiniteWreathGroup(m={self.m}, n={self.n}, k={self.k})"

    def check_budget(self, budget: int = DEFAULT_ELEMENT_BUDGET) -> None:
        if self.size > budget:
            raise BudgetExceededError(
                f"group of order {self.size} exceeds the element budget {budget}"
            )

    def identity(self) -> FiniteElement:
        return (0,) * len(self.positions), (0,) * self.k

    def _perm(self, t: tuple[int, ...]) -> tuple[int, ...]:
        # permutation sending f to its translate by t: new[i] = f[pos_i - t]
        cached = self._trans_perms.get(t)
        if cached is None:
            n = self.n
            cached = tuple(
                self.pos_index[tuple((c - s) % n for c, s in zip(pos, t))]
                for pos in self.positions
            )
            self._trans_perms[t] = cached
        return cached

    def translate_f(self, f: tuple[int, ...], t: tuple[int, ...]) -> tuple[int, ...]:
        perm = self._perm(t)
        return tuple(f[i] for i in perm)

    def multiply(self, x: FiniteElement, y: FiniteElement) -> FiniteElement:
        fx, tx = x
        fy, ty = y
        shifted = self.translate_f(fy, tx)
        m, n = self.m, self.n
        return (
            tuple((a + b) % m for a, b in zip(fx, shifted)),
            tuple((a + b) % n for a, b in zip(tx, ty)),
        )

    def inverse(self, x: FiniteElement) -> FiniteElement:
        f, t = x
        neg_t = tuple((-c) % self.n for c in t)
        shifted = self.translate_f(f, neg_t)
        return tuple((-a) % self.m for a in shifted), neg_t

    def elements(self) -> Iterator[FiniteElement]:
        for f in product(range(self.m), repeat=len(self.positions)):
            for t in product(range(self.n), repeat=self.k):
                yield f, t

    def project(self, g: WreathElement) -> FiniteElement:
        """Reduce an infinite-group element mod n; a group homomorphism."""
        if g.m != self.m or g.k != self.k:
            raise ValueError("element belongs to a different wreath product")
        vals = [0] * len(self.positions)
        for pos, val in g.f.items():
            idx = self.pos_index[tuple(c % self.n for c in pos)]
            vals[idx] = (vals[idx] + val) % self.m
        return tuple(vals), tuple(c % self.n for c in g.t)


def project(g: WreathElement, n: int) -> FiniteElement:
    """Standalone projection of g into Z_m wr (Z/n)^k."""
    return FiniteWreathGroup(g.m, n, g.k).project(g)


class FiniteAutomorphism:
    """Automorphism of a finite quotient induced by a WreathAutomorphism.

    The standard part permutes positions by x -> (A x + x0) mod n and
    scales values by u; an optional inner part conjugates by a fixed finite
    element.  Well defined because the position map is translation
    equivariant mod n.
    """

    def __init__(
        self,
        group: FiniteWreathGroup,
        matrix: IntMatrix,
        u: int,
        x0: Vector,
        inner: Optional[FiniteElement] = None,
    ):
        if matrix.k != group.k:
            raise ValueError("matrix rank does not match the group")
        self.group = group
        self.matrix = matrix
        self.u = u % group.m
        self.x0 = as_vector(x0)
        n = group.n
        self.sigma = tuple(
            group.pos_index[
                tuple((c + o) % n for c, o in zip(matrix.apply(pos), self.x0))
            ]
            for pos in group.positions
        )
        self.t_images = {
            t: tuple(c % n for c in matrix.apply(t))
            for t in product(range(n), repeat=group.k)
        }
        self.inner = inner
        self.inner_inv = group.inverse(inner) if inner is not None else None

    def standard_part(self) -> "FiniteAutomorphism":
        if self.inner is None:
            return self
        return FiniteAutomorphism(self.group, self.matrix, self.u, self.x0)

    def twist(self, gamma: FiniteElement) -> "FiniteAutomorphism":
        """Compose an inner twist on the left: conjugation by gamma after self."""
        inner = gamma if self.inner is None else self.group.multiply(gamma, self.inner)
        return FiniteAutomorphism(self.group, self.matrix, self.u, self.x0, inner)

    def apply(self, x: FiniteElement) -> FiniteElement:
        g = self.group
        f, t = x
        new_f = [0] * len(f)
        for i, val in enumerate(f):
            if val:
                new_f[self.sigma[i]] = (val * self.u) % g.m
        out = (tuple(new_f), self.t_images[t])
        if self.inner is not None:
            out = g.multiply(g.multiply(self.inner, out), self.inner_inv)
        return out


def induce_automorphism(phi: WreathAutomorphism, n: int) -> FiniteAutomorphism:
    """Automorphism of Z_m wr (Z/n)^k commuting with the projection."""
    group = FiniteWreathGroup(phi.m, n, phi.k)
    inner = group.project(phi.inner) if phi.inner is not None else None
    return FiniteAutomorphism(group, phi.matrix, phi.u, phi.x0, inner)


def _generators(group: FiniteWreathGroup) -> list[FiniteElement]:
    gens = []
    base = [0] * len(group.positions)
    base[group.pos_index[(0,) * group.k]] = 1
    gens.append((tuple(base), (0,) * group.k))
    if group.n > 1:
        zero_f = (0,) * len(group.positions)
        for i in range(group.k):
            t = tuple(1 if j == i else 0 for j in range(group.k))
            gens.append((zero_f, t))
    return gens


def twisted_classes_bruteforce(
    group: FiniteWreathGroup,
    aut: FiniteAutomorphism,
    budget: int = DEFAULT_ELEMENT_BUDGET,
) -> tuple[int, list[FiniteElement]]:
    """Exact twisted-class count and canonical representatives.

    Union-find closes the moves g -> gamma * g * aut(gamma)^-1 over the
    generating set (base generator at position 0 plus the translation
    units); representatives are the least element of each class in the
    canonical tuple order.
    """
    group.check_budget(budget)
    elems = list(group.elements())
    index = {e: i for i, e in enumerate(elems)}
    parent = list(range(len(elems)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    multiply = group.multiply
    steps = [(gen, group.inverse(aut.apply(gen))) for gen in _generators(group)]
    for i, x in enumerate(elems):
        for gen, tail in steps:
            y = multiply(multiply(gen, x), tail)
            ri, rj = find(i), find(index[y])
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    reps: dict[int, FiniteElement] = {}
    for i, x in enumerate(elems):
        root = find(i)
        if root not in reps:
            reps[root] = x  # elems are enumerated in canonical order
    return len(reps), [reps[r] for r in sorted(reps)]


@dataclass(frozen=True)
class IrrepLabel:
    """Little-group label of an irreducible representation.

    ``chi`` is the lexicographically least base character in its
    translation orbit; ``eta`` is a character of chi's stabilizer inside
    (Z/n)^k, encoded as the lex-least residue tuple of the full translation
    group restricting to it.  The dimension equals the orbit size.
    """

    chi: tuple[int, ...]
    eta: tuple[int, ...]
    dim: int


def _stabilizer(group: FiniteWreathGroup, chi: tuple[int, ...]) -> list[Vector]:
    return [b for b in group.positions if group.translate_f(chi, b) == chi]


def _eta_key(group: FiniteWreathGroup, stab: list[Vector], y: Vector) -> tuple[int, ...]:
    n = group.n
    return tuple(sum(a * b for a, b in zip(y, s)) % n for s in stab)


def _canonical_eta(group: FiniteWreathGroup, stab: list[Vector], y: Vector) -> Vector:
    target = _eta_key(group, stab, y)
    for cand in group.positions:
        if _eta_key(group, stab, cand) == target:
            return cand
    raise AssertionError("unreachable: y itself matches its key")


def _stabilizer_characters(group: FiniteWreathGroup, stab: list[Vector]) -> list[Vector]:
    seen: dict[tuple[int, ...], Vector] = {}
    for y in group.positions:
        seen.setdefault(_eta_key(group, stab, y), y)
    return sorted(seen.values())


def irreps_little_group(
    group: FiniteWreathGroup, budget: int = DEFAULT_ELEMENT_BUDGET
) -> tuple[IrrepLabel, ...]:
    """Complete list of irreducible representation labels.

    Base characters are m-residue tuples over the positions; the
    translation group permutes them, and each orbit representative chi
    together with a character eta of its stabilizer induces one
    irreducible of dimension equal to the orbit size.
    """
    group.check_budget(budget)
    m = group.m
    npk = len(group.positions)
    labels = []
    for chi in product(range(m), repeat=npk):
        orbit = {group.translate_f(chi, b) for b in group.positions}
        if min(orbit) != chi:
            continue
        stab = _stabilizer(group, chi)
        dim = len(orbit)
        for eta in _stabilizer_characters(group, stab):
            labels.append(IrrepLabel(chi, eta, dim))
    return tuple(labels)


def _transport_label(
    group: FiniteWreathGroup, aut: FiniteAutomorphism, label: IrrepLabel
) -> IrrepLabel:
    """Label of the representation pulled back along the automorphism.

    Composing a base character chi with the standard part gives
    (chi o phi')_x = u * chi(sigma(x)); the eta part pulls back through the
    quotient matrix, then both are canonicalized.  Inner parts are ignored
    because conjugate representations are equivalent.
    """
    m, n = group.m, group.n
    chi = label.chi
    new_chi = tuple((aut.u * chi[aut.sigma[i]]) % m for i in range(len(chi)))
    orbit = {group.translate_f(new_chi, b) for b in group.positions}
    canon_chi = min(orbit)
    stab = _stabilizer(group, canon_chi)
    pulled = tuple(
        c % n for c in aut.matrix.transpose().apply(label.eta)
    )
    canon_eta = _canonical_eta(group, stab, pulled)
    return IrrepLabel(canon_chi, canon_eta, len(orbit))


def phi_hat_fixed_count(
    group: FiniteWreathGroup,
    aut: FiniteAutomorphism,
    budget: int = DEFAULT_ELEMENT_BUDGET,
) -> int:
    """Number of irreducible representation classes fixed by pullback."""
    std = aut.standard_part()
    labels = irreps_little_group(group, budget)
    return sum(1 for label in labels if _transport_label(group, std, label) == label)


def tbft_check(
    group: FiniteWreathGroup,
    aut: FiniteAutomorphism,
    budget: int = DEFAULT_ELEMENT_BUDGET,
) -> bool:
    """Twisted class count equals the fixed representation count."""
    count, _ = twisted_classes_bruteforce(group, aut, budget)
    return count == phi_hat_fixed_count(group, aut, budget)


def oracle_report(
    group: FiniteWreathGroup,
    aut: FiniteAutomorphism,
    budget: int = DEFAULT_ELEMENT_BUDGET,
) -> dict:
    """JSON-ready summary of the full oracle pipeline on one quotient."""
    count, reps = twisted_classes_bruteforce(group, aut, budget)
    fixed = phi_hat_fixed_count(group, aut, budget)
    return {
        "group": {"m": group.m, "n": group.n, "k": group.k},
        "twisted_classes": count,
        "fixed_irreps": fixed,
        "tbft": count == fixed,
        "representatives": [
            {"f": list(f), "t": list(t)} for f, t in reps
        ],
    }
