"""Exact arithmetic over Z/p: residues, invertible 2x2 matrices, small matrix groups.

Everything here is an immutable value computed with plain Python integers, so
results are exact and safe to share between threads.  The three dihedral
stabiliser groups at the bottom are the fixed ingredients of the orbit counts
in :mod:`tatek.orbits`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence


class ModulusMismatch(ValueError):
    """Raised when combining values that live over different primes."""


class ClosureExceedsBound(RuntimeError):
    """Raised when a multiplicative closure grows past the caller's bound."""


def is_prime(p: int) -> bool:
    """Trial-division primality check; inputs here are tiny."""
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p}")
    return p


@dataclass(frozen=True)
class ModP:
    """A residue in the prime field Z/p."""

    value: int
    p: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other: "ModP | int") -> "ModP":
        if isinstance(other, int):
            return ModP(other, self.p)
        if other.p != self.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")
        return other

    def __add__(self, other: "ModP | int") -> "ModP":
        o = self._coerce(other)
        return ModP(self.value + o.value, self.p)

    def __sub__(self, other: "ModP | int") -> "ModP":
        o = self._coerce(other)
        return ModP(self.value - o.value, self.p)

    def __mul__(self, other: "ModP | int") -> "ModP":
        o = self._coerce(other)
        return ModP(self.value * o.value, self.p)

    def __neg__(self) -> "ModP":
        return ModP(-self.value, self.p)

    def inverse(self) -> "ModP":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return ModP(pow(self.value, self.p - 2, self.p), self.p)

    def __str__(self) -> str:
        return f"{self.value} (mod {self.p})"


@dataclass(frozen=True)
class Mat2P:
    """An invertible 2x2 matrix over Z/p, stored row-major as (a, b, c, d)."""

    a: int
    b: int
    c: int
    d: int
    p: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, getattr(self, name) % self.p)
        if self.det_value == 0:
            raise ValueError(f"matrix {self.rows()} is singular mod {self.p}")

    @classmethod
    def identity(cls, p: int) -> "Mat2P":
        return cls(1, 0, 0, 1, p)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int) -> "Mat2P":
        (a, b), (c, d) = rows
        return cls(a, b, c, d, p)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def det_value(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.p

    def det(self) -> ModP:
        return ModP(self.det_value, self.p)

    def __mul__(self, other: "Mat2P") -> "Mat2P":
        return mat_mul(self, other)

    def inverse(self) -> "Mat2P":
        inv_det = ModP(self.det_value, self.p).inverse().value
        return Mat2P(
            self.d * inv_det,
            -self.b * inv_det,
            -self.c * inv_det,
            self.a * inv_det,
            self.p,
        )

    def power(self, k: int) -> "Mat2P":
        if k < 0:
            return self.inverse().power(-k)
        result = Mat2P.identity(self.p)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def apply(self, v: tuple[int, int]) -> tuple[int, int]:
        """Left action on a column vector (l, m)."""
        l, m = v
        return ((self.a * l + self.b * m) % self.p, (self.c * l + self.d * m) % self.p)

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def key(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]] mod {self.p}"


def mat_mul(x: Mat2P, y: Mat2P) -> Mat2P:
    """Matrix product over the common modulus.

    The determinant is multiplicative, so products of invertible matrices stay
    invertible and the constructor check never fires here.
    """
    if x.p != y.p:
        raise ModulusMismatch(f"moduli differ: {x.p} vs {y.p}")
    return Mat2P(
        x.a * y.a + x.b * y.c,
        x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c,
        x.c * y.b + x.d * y.d,
        x.p,
    )


@dataclass(frozen=True)
class MatrixGroup:
    """A finite matrix group given by generators and its full element list.

    ``elements`` always contains the identity, is deduplicated, closed under
    products (hence under inverses, being finite), and is sorted by entry
    tuples so that iteration order is deterministic.
    """

    generators: tuple[Mat2P, ...]
    elements: tuple[Mat2P, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def p(self) -> int:
        return self.elements[0].p

    def __contains__(self, m: Mat2P) -> bool:
        return any(e.key() == m.key() for e in self.elements)


def group_closure(generators: Iterable[Mat2P], bound: int = 4096) -> MatrixGroup:
    """Smallest multiplicatively closed set containing the generators and 1.

    Plain breadth-first closure; ``bound`` caps the element count so a typo in
    a generator cannot send the enumeration off to all of GL_2.
    """
    gens = tuple(generators)
    if not gens:
        raise ValueError("need at least one generator to fix the modulus")
    p = gens[0].p
    for g in gens:
        if g.p != p:
            raise ModulusMismatch(f"moduli differ: {p} vs {g.p}")
    identity = Mat2P.identity(p)
    seen: dict[tuple[int, int, int, int], Mat2P] = {identity.key(): identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = m * g
                if prod.key() not in seen:
                    if len(seen) >= bound:
                        raise ClosureExceedsBound(
                            f"closure exceeded bound {bound} (modulus {p})"
                        )
                    seen[prod.key()] = prod
                    nxt.append(prod)
        frontier = nxt
    elements = tuple(sorted(seen.values(), key=Mat2P.key))
    return MatrixGroup(generators=gens, elements=elements)


class StabiliserKind(Enum):
    """The three stabiliser types of the reduced spine action of Out(F_2)."""

    EDGE = "edge"
    ROSE_VERTEX = "rose"
    THETA_VERTEX = "theta"


# Generic orders of the three stabilisers for p >= 5.  At p = 2, 3 some of the
# defining matrices coincide and deduplication shrinks the group; the order
# always divides the generic value.
GENERIC_STABILISER_ORDER = {
    StabiliserKind.EDGE: 4,
    StabiliserKind.ROSE_VERTEX: 8,
    StabiliserKind.THETA_VERTEX: 12,
}


def coordinate_swap(p: int) -> Mat2P:
    """(l, m) -> (m, l): the basis-exchange involution."""
    return Mat2P(0, 1, 1, 0, p)


def negate_both(p: int) -> Mat2P:
    """(l, m) -> (-l, -m): inversion of both generators."""
    return Mat2P(-1, 0, 0, -1, p)


def quarter_turn(p: int) -> Mat2P:
    """(l, m) -> (m, -l): the order-4 rose rotation; its square is -1."""
    return Mat2P(0, 1, -1, 0, p)


def sixth_turn(p: int) -> Mat2P:
    """(l, m) -> (m, m - l): the order-6 theta rotation; its cube is -1."""
    return Mat2P(0, 1, -1, 1, p)


def stabiliser_generators(kind: StabiliserKind, p: int) -> tuple[Mat2P, Mat2P]:
    check_prime(p)
    swap = coordinate_swap(p)
    if kind is StabiliserKind.EDGE:
        return (swap, negate_both(p))
    if kind is StabiliserKind.ROSE_VERTEX:
        return (swap, quarter_turn(p))
    if kind is StabiliserKind.THETA_VERTEX:
        return (swap, sixth_turn(p))
    raise ValueError(f"unknown stabiliser kind: {kind!r}")


@lru_cache(maxsize=None)
def stabiliser_group(kind: StabiliserKind, p: int) -> MatrixGroup:
    """The edge, rose-vertex or theta-vertex stabiliser as a matrix group."""
    return group_closure(stabiliser_generators(kind, p), bound=64)
