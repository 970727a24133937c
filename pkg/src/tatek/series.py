"""Finite-support Poincare series, group expressions, and the cohomology registry.

A :class:`PoincareSeries` records the dimensions of the rational cohomology of
a group, degree by degree.  Every group in scope has finite-support series, so
products collapse to finite convolutions (Kunneth).  Series that the
literature has computed but that cannot be derived here are curated in a
versioned JSON data file shipped with the package; each entry carries its
citation, and entries with no published value are stored with status
"unknown" and poison any computation that touches them.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

REGISTRY_ENV_VAR = "TATEK_REGISTRY"
_DEFAULT_REGISTRY_RESOURCE = "cohomology_registry.json"


class UnknownCohomology(Exception):
    """A computation touched a registry entry with no known series."""

    def __init__(self, name: str):
        super().__init__(f"no known cohomology for registry entry '{name}'")
        self.name = name


class NoSuchEntry(KeyError):
    """A registry name that is not curated and matches no dynamic rule."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name


@dataclass(frozen=True)
class PoincareSeries:
    """Finite-support map degree -> dimension, stored as sorted pairs."""

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_dims(cls, dims: Mapping[int, int]) -> "PoincareSeries":
        cleaned = {}
        for degree, dim in dims.items():
            degree = int(degree)
            dim = int(dim)
            if degree < 0 or dim < 0:
                raise ValueError(f"bad series entry {degree}: {dim}")
            if dim:
                cleaned[degree] = dim
        return cls(tuple(sorted(cleaned.items())))

    def dims(self) -> dict[int, int]:
        return dict(self.pairs)

    def dim(self, degree: int) -> int:
        for d, v in self.pairs:
            if d == degree:
                return v
        return 0

    @property
    def max_degree(self) -> int:
        return self.pairs[-1][0] if self.pairs else 0

    def convolve(self, other: "PoincareSeries") -> "PoincareSeries":
        """Coefficient-wise convolution: the Kunneth product."""
        out: dict[int, int] = {}
        for d1, v1 in self.pairs:
            for d2, v2 in other.pairs:
                out[d1 + d2] = out.get(d1 + d2, 0) + v1 * v2
        return PoincareSeries.from_dims(out)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{d}: {v}" for d, v in self.pairs) + "}"


def series_point() -> PoincareSeries:
    """The series of any finite group: rationally acyclic."""
    return PoincareSeries.from_dims({0: 1})


def series_free_group(rank: int) -> PoincareSeries:
    if rank < 0:
        raise ValueError("rank must be >= 0")
    return PoincareSeries.from_dims({0: 1, 1: rank})


def series_free_abelian(rank: int) -> PoincareSeries:
    """Exterior algebra on `rank` degree-one generators: binomial dimensions."""
    from math import comb

    if rank < 0:
        raise ValueError("rank must be >= 0")
    return PoincareSeries.from_dims({i: comb(rank, i) for i in range(rank + 1)})


def even_odd_totals(s: PoincareSeries) -> tuple[int, int]:
    even = sum(v for d, v in s.pairs if d % 2 == 0)
    odd = sum(v for d, v in s.pairs if d % 2 == 1)
    return (even, odd)


def flip_symmetric_square(s: PoincareSeries) -> PoincareSeries:
    """Invariants of s (x) s under the factor flip with the Koszul sign.

    With basis elements e_i of degree d_i, the flip sends e_i (x) e_j to
    (-1)^(d_i d_j) e_j (x) e_i.  Unordered pairs i < j each give one
    invariant; diagonal terms survive exactly when d_i is even.  In
    generating-function terms the result is (S(x)^2 + S(-x^2)) / 2.
    """
    square = s.convolve(s)
    signed_diag: dict[int, int] = {}
    for d, v in s.pairs:
        signed_diag[2 * d] = (v if d % 2 == 0 else -v)
    out: dict[int, int] = {}
    degrees = set(dict(square.pairs)) | set(signed_diag)
    for degree in degrees:
        total = square.dim(degree) + signed_diag.get(degree, 0)
        if total % 2 != 0:
            raise AssertionError(f"flip-square parity failure at degree {degree}")
        out[degree] = total // 2
    return PoincareSeries.from_dims(out)


# ---------------------------------------------------------------------------
# Group expressions


@dataclass(frozen=True)
class GroupExpr:
    """Base class for the small expression language of centraliser shapes."""


@dataclass(frozen=True)
class Finite(GroupExpr):
    pass


@dataclass(frozen=True)
class FreeGroup(GroupExpr):
    rank: int


@dataclass(frozen=True)
class FreeAbelian(GroupExpr):
    rank: int


@dataclass(frozen=True)
class RegistryRef(GroupExpr):
    name: str


@dataclass(frozen=True)
class Product(GroupExpr):
    factors: tuple[GroupExpr, ...]


@dataclass(frozen=True)
class FlipSquare(GroupExpr):
    """Z/2-invariants of inner x inner where Z/2 swaps the factors."""

    inner: GroupExpr


# ---------------------------------------------------------------------------
# Registry


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    status: str  # "known" | "unknown"
    series: PoincareSeries | None
    citation: str

    @property
    def known(self) -> bool:
        return self.status == "known"


# Names with no published computation resolve to synthetic unknown entries so
# that enumeration in large ranks degrades to unknown results instead of
# erroring: Aut(F_r) for r >= 6, Out(F_r) for r >= 8, and the rose
# centraliser cores (F_r x| Aut(F_r)) x| Z/2 for r >= 5.
_DYNAMIC_UNKNOWN = (
    (re.compile(r"AutF(\d+)"), 6, "H_*(Aut(F_{r}); Q) has no published computation."),
    (re.compile(r"OutF(\d+)"), 8, "H_*(Out(F_{r}); Q) has no published computation."),
    (
        re.compile(r"F(\d+)SemidirectAutF(\d+)_Z2invariants"),
        5,
        "H^*(F_{r} x| Aut(F_{r}); Q)^{{Z/2}} has no published computation.",
    ),
)


class Registry:
    """Citation-tagged series registry backed by a versioned JSON data file."""

    def __init__(self, entries: dict[str, RegistryEntry], version: int):
        self._entries = entries
        self.version = version

    @classmethod
    def from_json_text(cls, text: str) -> "Registry":
        raw = json.loads(text)
        entries: dict[str, RegistryEntry] = {}
        for name, body in raw["entries"].items():
            status = body["status"]
            if status not in ("known", "unknown"):
                raise ValueError(f"registry entry {name}: bad status {status!r}")
            citation = body.get("citation", "")
            if status == "known":
                if not citation:
                    raise ValueError(f"registry entry {name}: missing citation")
                series = PoincareSeries.from_dims(
                    {int(k): int(v) for k, v in body["dims"].items()}
                )
                if series.dim(0) < 1:
                    raise ValueError(f"registry entry {name}: dims[0] must be >= 1")
            else:
                if "dims" in body:
                    raise ValueError(f"registry entry {name}: unknown entries carry no dims")
                series = None
            entries[name] = RegistryEntry(
                name=name, status=status, series=series, citation=citation
            )
        return cls(entries, version=int(raw.get("version", 0)))

    @classmethod
    def load_default(cls) -> "Registry":
        override = os.environ.get(REGISTRY_ENV_VAR)
        if override:
            with open(override, "r", encoding="utf-8") as fh:
                return cls.from_json_text(fh.read())
        text = (
            resources.files("tatek")
            .joinpath("data", _DEFAULT_REGISTRY_RESOURCE)
            .read_text(encoding="utf-8")
        )
        return cls.from_json_text(text)

    def names(self) -> list[str]:
        return sorted(self._entries)

    def lookup(self, name: str) -> RegistryEntry:
        entry = self._entries.get(name)
        if entry is not None:
            return entry
        for pattern, threshold, template in _DYNAMIC_UNKNOWN:
            match = pattern.fullmatch(name)
            if match is None:
                continue
            ranks = set(match.groups())
            if len(ranks) == 1 and int(match.group(1)) >= threshold:
                return RegistryEntry(
                    name=name,
                    status="unknown",
                    series=None,
                    citation=template.format(r=match.group(1)),
                )
        raise NoSuchEntry(name)


_default_registry: Registry | None = None


def default_registry() -> Registry:
    global _default_registry
    if _default_registry is None:
        _default_registry = Registry.load_default()
    return _default_registry


def reset_default_registry() -> None:
    """Drop the cached registry (used after changing the override env var)."""
    global _default_registry
    _default_registry = None


def registry_lookup(name: str, registry: Registry | None = None) -> RegistryEntry:
    return (registry or default_registry()).lookup(name)


def series_of(expr: GroupExpr, registry: Registry | None = None) -> PoincareSeries:
    """Evaluate a group expression to its rational cohomology series.

    Raises :class:`UnknownCohomology` naming the blocking entry as soon as an
    unknown registry value is touched, so unknowns poison eagerly.
    """
    reg = registry or default_registry()
    if isinstance(expr, Finite):
        return series_point()
    if isinstance(expr, FreeGroup):
        return series_free_group(expr.rank)
    if isinstance(expr, FreeAbelian):
        return series_free_abelian(expr.rank)
    if isinstance(expr, RegistryRef):
        entry = reg.lookup(expr.name)
        if not entry.known:
            raise UnknownCohomology(expr.name)
        assert entry.series is not None
        return entry.series
    if isinstance(expr, Product):
        result = series_point()
        for factor in expr.factors:
            result = result.convolve(series_of(factor, reg))
        return result
    if isinstance(expr, FlipSquare):
        return flip_symmetric_square(series_of(expr.inner, reg))
    raise TypeError(f"not a group expression: {expr!r}")


def citations_of(expr: GroupExpr, registry: Registry | None = None) -> list[str]:
    """Citations of every registry entry referenced by an expression."""
    reg = registry or default_registry()
    out: list[str] = []

    def walk(e: GroupExpr) -> None:
        if isinstance(e, RegistryRef):
            entry = reg.lookup(e.name)
            if entry.citation and entry.citation not in out:
                out.append(entry.citation)
        elif isinstance(e, Product):
            for f in e.factors:
                walk(f)
        elif isinstance(e, FlipSquare):
            walk(e.inner)

    walk(expr)
    return out
