"""Assembly of p-adic Farrell-Tate K-theory dimensions from centraliser data.

For a group with a finite classifying space for proper actions, the
Farrell-Tate K-theory in degree m is the product over conjugacy classes [g]
of nontrivial p-power order of the even (m = 0) or odd (m = 1) rational
cohomology of the centraliser of <g>, with Q_p coefficients.  Every series in
scope has finite support, so the products collapse to finite integer sums and
the only data a result carries are two dimensions.  Unknown is a first-class
value naming the registry entry that blocks a computation, so unfilled table
cells reproduce faithfully instead of erroring.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .classes import ClassList, ConjClassDescriptor, OutOfRange, centraliser_of, order_p_classes
from .modp import check_prime
from .series import (
    FreeAbelian,
    FreeGroup,
    Registry,
    UnknownCohomology,
    citations_of,
    default_registry,
    even_odd_totals,
    series_of,
)


class NonIntegral(ArithmeticError):
    """A closed-form count failed an exact divisibility check."""


@dataclass(frozen=True)
class Unknown:
    """A dimension that cannot be computed; carries the blocking entry name."""

    blocker: str

    def __str__(self) -> str:
        return f"unknown({self.blocker})"


Dim = int | Unknown


@dataclass(frozen=True)
class Contribution:
    label: str
    even: Dim
    odd: Dim
    descriptor: ConjClassDescriptor | None = None


@dataclass(frozen=True)
class TateKResult:
    p: int
    group_id: str
    dim_even: Dim
    dim_odd: Dim
    weak_duality: bool | Unknown
    euler_char: int | Unknown
    contributions: tuple[Contribution, ...]
    citations: tuple[str, ...]

    @property
    def known(self) -> bool:
        return not isinstance(self.dim_even, Unknown) and not isinstance(
            self.dim_odd, Unknown
        )


def _finish(
    p: int,
    group_id: str,
    contributions: tuple[Contribution, ...],
    citations: tuple[str, ...],
) -> TateKResult:
    blockers = [
        c.even.blocker for c in contributions if isinstance(c.even, Unknown)
    ] + [c.odd.blocker for c in contributions if isinstance(c.odd, Unknown)]
    if blockers:
        blocked = Unknown(blockers[0])
        return TateKResult(
            p=p,
            group_id=group_id,
            dim_even=blocked,
            dim_odd=blocked,
            weak_duality=blocked,
            euler_char=blocked,
            contributions=contributions,
            citations=citations,
        )
    even = sum(c.even for c in contributions)
    odd = sum(c.odd for c in contributions)
    return TateKResult(
        p=p,
        group_id=group_id,
        dim_even=even,
        dim_odd=odd,
        weak_duality=(odd == 0),
        euler_char=even - odd,
        contributions=contributions,
        citations=citations,
    )


def tate_k(
    p: int,
    n: int,
    registry: Registry | None = None,
    class_filter=None,
) -> TateKResult:
    """Farrell-Tate K-theory dimensions of Out(F_n) at the prime p.

    ``class_filter`` optionally restricts the class list (used by tests to
    itemise contributions); the public result always uses the full list.
    Raises :class:`OutOfRange` when (p, n) has no supported classification;
    an Unknown result is a value, not an error.
    """
    reg = registry or default_registry()
    class_list: ClassList = order_p_classes(p, n)
    descriptors = class_list.classes
    if class_filter is not None:
        descriptors = tuple(c for c in descriptors if class_filter(c))
    contributions: list[Contribution] = []
    citations: list[str] = []
    for c in descriptors:
        expr = centraliser_of(c)
        if c.citation and c.citation not in citations:
            citations.append(c.citation)
        try:
            series = series_of(expr, reg)
            if series.max_degree > 2 * n:
                raise AssertionError(
                    f"series degree {series.max_degree} exceeds 2n = {2 * n} "
                    f"for class {c.label}: registry data error?"
                )
            even, odd = even_odd_totals(series)
            contributions.append(
                Contribution(label=c.label, even=even, odd=odd, descriptor=c)
            )
        except UnknownCohomology as exc:
            contributions.append(
                Contribution(
                    label=c.label,
                    even=Unknown(exc.name),
                    odd=Unknown(exc.name),
                    descriptor=c,
                )
            )
        for cite in citations_of(expr, reg):
            if cite not in citations:
                citations.append(cite)
    return _finish(p, f"Out(F_{n})", tuple(contributions), tuple(citations))


@dataclass(frozen=True)
class RationalKResult:
    """Rationalised p-adic K-theory of B Out(F_n): Tate dims plus H^*(Out(F_n))."""

    p: int
    n: int
    dim_even: Dim
    dim_odd: Dim
    tate: TateKResult
    outfn_even: Dim
    outfn_odd: Dim
    citations: tuple[str, ...]

    @property
    def known(self) -> bool:
        return not isinstance(self.dim_even, Unknown)


def rational_k(p: int, n: int, registry: Registry | None = None) -> RationalKResult:
    reg = registry or default_registry()
    tate = tate_k(p, n, registry=reg)
    entry = reg.lookup(f"OutF{n}")
    citations = list(tate.citations)
    if entry.citation and entry.citation not in citations:
        citations.append(entry.citation)
    if not entry.known:
        blocked = Unknown(entry.name)
        out_even: Dim = blocked
        out_odd: Dim = blocked
    else:
        assert entry.series is not None
        out_even, out_odd = even_odd_totals(entry.series)
    if isinstance(tate.dim_even, Unknown):
        blocked = tate.dim_even
    elif isinstance(out_even, Unknown):
        blocked = out_even
    else:
        blocked = None
    if blocked is not None:
        return RationalKResult(
            p=p,
            n=n,
            dim_even=blocked,
            dim_odd=blocked,
            tate=tate,
            outfn_even=out_even,
            outfn_odd=out_odd,
            citations=tuple(citations),
        )
    return RationalKResult(
        p=p,
        n=n,
        dim_even=tate.dim_even + out_even,
        dim_odd=tate.dim_odd + out_odd,
        tate=tate,
        outfn_even=out_even,
        outfn_odd=out_odd,
        citations=tuple(citations),
    )


def weak_duality(p: int, n: int, registry: Registry | None = None) -> bool | Unknown:
    """Whether the odd Farrell-Tate K-group vanishes (weak duality)."""
    return tate_k(p, n, registry=registry).weak_duality


# ---------------------------------------------------------------------------
# Example families


_SL3_CITATIONS = (
    "Tezuka-Yagita (1992) and Tahara (1971): SL_3(Z) has 2 classes each of "
    "orders 2, 3 and 4.",
    "Adem (1992); Lueck-Patchkoria-Schwede style centraliser analysis: all "
    "prime-power centralisers in SL_3(Z) are rationally acyclic.",
)
_GL_CITATIONS = (
    "Latimer-MacDuffee; Ash (Lemma 4): order-p classes of GL_{p-1}(Z) biject "
    "with the ideal class group of Q(zeta_p); centralisers are the unit group "
    "Z/p x Z/2 x Z^{(p-3)/2} (Dirichlet unit theorem).",
)
_SP_CITATIONS = (
    "Sjerve-Yang (Thm 3): 2^{(p-1)/2} h_p^- order-p classes in Sp_{p-1}(Z); "
    "Busch (Sec 3.2), Brown: centralisers are the finite group Z/p x Z/2.",
)
_MCG_CITATIONS = (
    "Xia (Ch III, Sec 3.1-3.2): (p+1)(p-1)/6 order-p classes in the mapping "
    "class group of genus (p-1)/2, all with finite centralisers.",
)
_AMALGAM_CITATIONS = (
    "Bass-Serre theory (Serre): the amalgam acts on its covering tree; one "
    "order-p class with centraliser Z/p x F_{p-2}.",
)


def _class_number_table() -> dict[str, dict[str, int]]:
    text = (
        resources.files("tatek")
        .joinpath("data", "class_numbers.json")
        .read_text(encoding="utf-8")
    )
    return json.loads(text)


def builtin_class_number(p: int) -> int | None:
    """h_p for Q(zeta_p) from the bundled table, or None if not tabulated."""
    return _class_number_table()["cyclotomic_class_number"].get(str(p))


def builtin_relative_class_number(p: int) -> int | None:
    return _class_number_table()["relative_class_number"].get(str(p))


def example_sl3() -> tuple[TateKResult, TateKResult]:
    """Farrell-Tate K-theory of SL_3(Z) at its two torsion primes, 2 and 3."""
    two_power = tuple(
        Contribution(label=label, even=1, odd=0)
        for label in ("order2_class_1", "order2_class_2", "order4_class_1", "order4_class_2")
    )
    three_power = tuple(
        Contribution(label=label, even=1, odd=0)
        for label in ("order3_class_1", "order3_class_2")
    )
    return (
        _finish(2, "SL_3(Z)", two_power, _SL3_CITATIONS),
        _finish(3, "SL_3(Z)", three_power, _SL3_CITATIONS),
    )


def _require_count(p: int, supplied: int | None, lookup, what: str) -> int:
    if supplied is not None:
        if supplied < 1:
            raise ValueError(f"{what} must be positive, got {supplied}")
        return supplied
    value = lookup(p)
    if value is None:
        raise ValueError(
            f"no bundled {what} for p={p}; pass it explicitly"
        )
    return value


def example_gl(p: int, class_number: int | None = None) -> TateKResult:
    """GL_{p-1}(Z) for p >= 5: h classes, unit-group centralisers.

    Even and odd dimensions agree (each h * 2^{(p-5)/2}), so the Euler
    characteristic vanishes and weak duality fails.
    """
    check_prime(p)
    if p < 5:
        raise ValueError(f"the GL_(p-1) family needs p >= 5, got {p}")
    h = _require_count(p, class_number, builtin_class_number, "class number")
    per_class = even_odd_totals(series_of(FreeAbelian((p - 3) // 2)))
    contribution = Contribution(
        label=f"ideal_classes(h={h})", even=h * per_class[0], odd=h * per_class[1]
    )
    return _finish(p, f"GL_{p - 1}(Z)", (contribution,), _GL_CITATIONS)


def example_sp(p: int, relative_class_number: int | None = None) -> TateKResult:
    """Sp_{p-1}(Z) for p >= 5: 2^{(p-1)/2} h_p^- classes, finite centralisers."""
    check_prime(p)
    if p < 5:
        raise ValueError(f"the Sp_(p-1) family needs p >= 5, got {p}")
    h_minus = _require_count(
        p, relative_class_number, builtin_relative_class_number, "relative class number"
    )
    count = 2 ** ((p - 1) // 2) * h_minus
    contribution = Contribution(
        label=f"pair_classes(h_minus={h_minus})", even=count, odd=0
    )
    return _finish(p, f"Sp_{p - 1}(Z)", (contribution,), _SP_CITATIONS)


def example_mcg(p: int) -> TateKResult:
    """Mapping class group of genus (p-1)/2 for p >= 5: all centralisers finite."""
    check_prime(p)
    if p < 5:
        raise ValueError(f"the mapping class group family needs p >= 5, got {p}")
    product = (p + 1) * (p - 1)
    count, remainder = divmod(product, 6)
    if remainder != 0:
        raise NonIntegral(f"(p+1)(p-1) = {product} is not divisible by 6")
    contribution = Contribution(label="order_p_classes", even=count, odd=0)
    return _finish(p, f"MCG(Sigma_{(p - 1) // 2})", (contribution,), _MCG_CITATIONS)


def example_amalgam(p: int) -> TateKResult:
    """(Z/p x| Z/(p-1)) *_{Z/p} (Z/p x| Z/(p-1)) for odd p: one class,
    centraliser Z/p x F_{p-2}; the Euler characteristic is 3 - p."""
    check_prime(p)
    if p < 3:
        raise ValueError(f"the amalgam family needs an odd prime, got {p}")
    even, odd = even_odd_totals(series_of(FreeGroup(p - 2)))
    contribution = Contribution(label="order_p_class", even=even, odd=odd)
    return _finish(p, f"amalgam(p={p})", (contribution,), _AMALGAM_CITATIONS)


EXAMPLE_FAMILIES = ("sl3", "gl", "sp", "mcg", "amalgam")


# ---------------------------------------------------------------------------
# Table emission

TABLE4_RANKS = tuple(range(2, 13))
TABLE4_PRIMES = (2, 3, 5, 7, 11)
TABLE5_RANKS = tuple(range(2, 8))
TABLE5_PRIMES = (2, 3, 5, 7)

OUT_OF_RANGE_REASON = "outside the supported classification range"


@dataclass(frozen=True)
class TableCell:
    n: int
    p: int
    status: str  # "known" | "unknown"
    even: int | None
    odd: int | None
    blocker: str | None
    reason: str | None


@dataclass(frozen=True)
class TableDocument:
    which: int
    title: str
    ranks: tuple[int, ...]
    primes: tuple[int, ...]
    cells: tuple[TableCell, ...]
    citations: tuple[str, ...]

    def cell(self, n: int, p: int) -> TableCell:
        for c in self.cells:
            if c.n == n and c.p == p:
                return c
        raise KeyError((n, p))


def _tate_cell(p: int, n: int, reg: Registry, citations: list[str]) -> TableCell:
    try:
        result = tate_k(p, n, registry=reg)
    except OutOfRange:
        return TableCell(
            n=n, p=p, status="unknown", even=None, odd=None, blocker=None,
            reason=OUT_OF_RANGE_REASON,
        )
    for cite in result.citations:
        if cite not in citations:
            citations.append(cite)
    if not result.known:
        blocker = result.dim_even.blocker
        return TableCell(
            n=n, p=p, status="unknown", even=None, odd=None, blocker=blocker,
            reason=f"blocked on registry entry {blocker}",
        )
    return TableCell(
        n=n, p=p, status="known",
        even=result.dim_even, odd=result.dim_odd,
        blocker=None, reason=None,
    )


def _rational_cell(p: int, n: int, reg: Registry, citations: list[str]) -> TableCell:
    try:
        result = rational_k(p, n, registry=reg)
    except OutOfRange:
        return TableCell(
            n=n, p=p, status="unknown", even=None, odd=None, blocker=None,
            reason=OUT_OF_RANGE_REASON,
        )
    for cite in result.citations:
        if cite not in citations:
            citations.append(cite)
    if not result.known:
        blocker = result.dim_even.blocker
        return TableCell(
            n=n, p=p, status="unknown", even=None, odd=None, blocker=blocker,
            reason=f"blocked on registry entry {blocker}",
        )
    return TableCell(
        n=n, p=p, status="known",
        even=result.dim_even, odd=result.dim_odd,
        blocker=None, reason=None,
    )


def emit_table(which: int, registry: Registry | None = None) -> TableDocument:
    """Table 4 (Farrell-Tate dims of Out(F_n)) or 5 (rationalised p-adic dims).

    Cells are ordered by (n, p); cells the available methods cannot compute
    are emitted with status "unknown", carrying the blocking registry entry
    name where one exists.
    """
    reg = registry or default_registry()
    citations: list[str] = []
    if which == 4:
        ranks, primes, fill = TABLE4_RANKS, TABLE4_PRIMES, _tate_cell
        title = "p-adic Farrell-Tate K-theory of Out(F_n): (even, odd) Q_p-dimensions"
    elif which == 5:
        ranks, primes, fill = TABLE5_RANKS, TABLE5_PRIMES, _rational_cell
        title = "Rationalised p-adic K-theory of B Out(F_n): (even, odd) Q_p-dimensions"
    else:
        raise ValueError(f"no such table: {which} (supported: 4, 5)")
    cells = tuple(fill(p, n, reg, citations) for n in ranks for p in primes)
    return TableDocument(
        which=which,
        title=title,
        ranks=ranks,
        primes=primes,
        cells=cells,
        citations=tuple(citations),
    )
