"""Fixed points and orbits of the stabiliser actions on nonzero vectors of (Z/p)^2.

Orbit counting is done twice on purpose: once by averaging fixed-point counts
over the group (the lemma that is not Burnside's) and once by explicitly
partitioning the p^2 - 1 nonzero vectors.  The closed forms are claims that
the tests check against both computations, never the implementation itself.
All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .modp import (
    GENERIC_STABILISER_ORDER,
    Mat2P,
    MatrixGroup,
    StabiliserKind,
    check_prime,
    stabiliser_group,
)


class NonIntegralOrbitCount(ArithmeticError):
    """The Burnside average failed to be an integer: an implementation bug."""


def kernel_dimension_of_m_minus_identity(m: Mat2P) -> int:
    """dim ker(M - 1) over Z/p, computed from the 2x2 entries directly."""
    p = m.p
    a = (m.a - 1) % p
    b = m.b % p
    c = m.c % p
    d = (m.d - 1) % p
    if a == 0 and b == 0 and c == 0 and d == 0:
        return 2
    if (a * d - b * c) % p == 0:
        return 1
    return 0


@dataclass(frozen=True)
class FixedPointReport:
    """Count (and optionally the list) of nonzero vectors fixed by a matrix."""

    matrix: Mat2P
    count: int
    solutions: tuple[tuple[int, int], ...] | None = None


def nonzero_vectors(p: int) -> Iterator[tuple[int, int]]:
    for l in range(p):
        for m in range(p):
            if l or m:
                yield (l, m)


def fixed_points(m: Mat2P, list_solutions: bool = False) -> FixedPointReport:
    """Nonzero solutions of Mv = v.

    The count is p^k - 1 where k = dim ker(M - 1); when solutions are listed
    they are enumerated independently and cross-checked against that count.
    """
    k = kernel_dimension_of_m_minus_identity(m)
    count = m.p ** k - 1
    solutions = None
    if list_solutions:
        solutions = tuple(v for v in nonzero_vectors(m.p) if m.apply(v) == v)
        if len(solutions) != count:
            raise AssertionError(
                f"kernel count {count} disagrees with enumeration "
                f"{len(solutions)} for {m}"
            )
    return FixedPointReport(matrix=m, count=count, solutions=solutions)


def burnside_orbit_count(g: MatrixGroup) -> int:
    """Number of orbits on nonzero vectors: the average fixed-point count."""
    total = sum(fixed_points(m).count for m in g.elements)
    orbits, remainder = divmod(total, g.order)
    if remainder != 0:
        raise NonIntegralOrbitCount(
            f"fixed-point total {total} not divisible by group order {g.order}"
        )
    return orbits


def enumerate_orbits(g: MatrixGroup) -> list[list[tuple[int, int]]]:
    """Explicit orbit partition of the nonzero vectors; the independent oracle.

    Orbits are listed by their lexicographically smallest element, each orbit
    sorted, so the output is deterministic.
    """
    p = g.p
    seen: set[tuple[int, int]] = set()
    orbits: list[list[tuple[int, int]]] = []
    for v in nonzero_vectors(p):
        if v in seen:
            continue
        orbit = {m.apply(v) for m in g.elements}
        seen |= orbit
        orbits.append(sorted(orbit))
    return orbits


def closed_form_orbits(kind: StabiliserKind, p: int) -> int:
    """The published orbit counts; p = 2, 3 are the only special cases."""
    check_prime(p)
    if kind is StabiliserKind.EDGE:
        if p == 2:
            return 2
        return (p - 1) * (p + 3) // 4
    if kind is StabiliserKind.ROSE_VERTEX:
        if p in (2, 3):
            return 2
        return (p - 1) * (p + 5) // 8
    if kind is StabiliserKind.THETA_VERTEX:
        if p == 2:
            return 1
        if p == 3:
            return 2
        return (p - 1) * (p + 7) // 12
    raise ValueError(f"unknown stabiliser kind: {kind!r}")


@dataclass(frozen=True)
class OrbitReport:
    """Burnside count, brute-force count and closed form for one stabiliser."""

    kind: StabiliserKind
    p: int
    per_element_counts: tuple[tuple[Mat2P, int], ...]
    orbit_count: int
    brute_force_count: int
    closed_form: int
    match: bool
    orbits: tuple[tuple[tuple[int, int], ...], ...] | None = None


def orbit_report(
    kind: StabiliserKind, p: int, list_orbits: bool = False
) -> OrbitReport:
    group = stabiliser_group(kind, p)
    per_element = tuple((m, fixed_points(m).count) for m in group.elements)
    burnside = burnside_orbit_count(group)
    partition = enumerate_orbits(group)
    closed = closed_form_orbits(kind, p)
    return OrbitReport(
        kind=kind,
        p=p,
        per_element_counts=per_element,
        orbit_count=burnside,
        brute_force_count=len(partition),
        closed_form=closed,
        match=(burnside == len(partition) == closed),
        orbits=tuple(tuple(o) for o in partition) if list_orbits else None,
    )


@dataclass(frozen=True)
class QuotientGraphSummary:
    """Orbit counts and first Betti number of the quotient of the spine tree.

    The spine is a tree and the quotient is connected, so
    betti_one = edge_orbits - vertex_orbits + 1.
    """

    p: int
    vertex_orbits: int
    edge_orbits: int
    betti_one: int


def quotient_summary(p: int) -> QuotientGraphSummary:
    """Vertex/edge orbit counts of the quotient graph and its Betti number."""
    check_prime(p)
    rose = burnside_orbit_count(stabiliser_group(StabiliserKind.ROSE_VERTEX, p))
    theta = burnside_orbit_count(stabiliser_group(StabiliserKind.THETA_VERTEX, p))
    edges = burnside_orbit_count(stabiliser_group(StabiliserKind.EDGE, p))
    vertices = rose + theta
    betti = edges - vertices + 1
    if betti < 0:
        raise AssertionError(f"negative Betti number at p={p}: {betti}")
    return QuotientGraphSummary(
        p=p, vertex_orbits=vertices, edge_orbits=edges, betti_one=betti
    )


def betti_closed_form(p: int) -> int:
    """(p-7)(p-5)/24 for p >= 5, zero for p = 2, 3: a claim kept for tests."""
    check_prime(p)
    if p in (2, 3):
        return 0
    return (p - 7) * (p - 5) // 24


def stabiliser_order_is_generic(kind: StabiliserKind, p: int) -> bool:
    return stabiliser_group(kind, p).order == GENERIC_STABILISER_ORDER[kind]
