import json

import pytest
from hypothesis import given, strategies as st

from tatek.series import (
    Finite,
    FlipSquare,
    FreeAbelian,
    FreeGroup,
    NoSuchEntry,
    PoincareSeries,
    Product,
    Registry,
    RegistryRef,
    UnknownCohomology,
    citations_of,
    default_registry,
    even_odd_totals,
    flip_symmetric_square,
    registry_lookup,
    series_of,
    series_point,
)

series_dims = st.dictionaries(st.integers(0, 8), st.integers(0, 5), max_size=6)


def test_series_of_finite():
    assert series_of(Finite()).dims() == {0: 1}


def test_series_of_circle():
    assert series_of(FreeAbelian(1)).dims() == {0: 1, 1: 1}


def test_series_of_product_example():
    s = series_of(Product((FreeAbelian(1), FreeGroup(2))))
    assert s.dims() == {0: 1, 1: 3, 2: 2}


def test_series_free_abelian_two():
    # (p - 3) / 2 = 2 at p = 7: the rank of the free part of the unit group.
    assert series_of(FreeAbelian(2)).dims() == {0: 1, 1: 2, 2: 1}


def test_even_odd_examples():
    assert even_odd_totals(series_point()) == (1, 0)
    assert even_odd_totals(series_of(FreeAbelian(1))) == (1, 1)
    assert even_odd_totals(PoincareSeries.from_dims({0: 1, 1: 1})) == (1, 1)


def test_free_abelian_totals_are_balanced():
    for r in range(1, 9):
        assert even_odd_totals(series_of(FreeAbelian(r))) == (2 ** (r - 1), 2 ** (r - 1))


@given(series_dims, series_dims)
def test_convolution_commutative(d1, d2):
    a = PoincareSeries.from_dims(d1)
    b = PoincareSeries.from_dims(d2)
    assert a.convolve(b) == b.convolve(a)


@given(series_dims, series_dims, series_dims)
def test_convolution_associative(d1, d2, d3):
    a, b, c = (PoincareSeries.from_dims(d) for d in (d1, d2, d3))
    assert a.convolve(b).convolve(c) == a.convolve(b.convolve(c))


@given(series_dims)
def test_point_is_the_unit(d):
    a = PoincareSeries.from_dims(d)
    assert a.convolve(series_point()) == a


@given(series_dims, series_dims)
def test_even_odd_multiplicative(d1, d2):
    a = PoincareSeries.from_dims(d1)
    b = PoincareSeries.from_dims(d2)
    e1, o1 = even_odd_totals(a)
    e2, o2 = even_odd_totals(b)
    assert even_odd_totals(a.convolve(b)) == (e1 * e2 + o1 * o2, e1 * o2 + o1 * e2)


def test_flip_square_acyclic():
    assert flip_symmetric_square(series_point()).dims() == {0: 1}


def test_flip_square_even_input():
    s = PoincareSeries.from_dims({0: 1, 4: 1})
    assert flip_symmetric_square(s).dims() == {0: 1, 4: 1, 8: 1}


def test_flip_square_odd_generator():
    # One odd class e: e (x) e is anti-invariant, the degree-0 square and
    # nothing else survives alongside the mixed terms.
    s = PoincareSeries.from_dims({0: 1, 1: 1})
    assert flip_symmetric_square(s).dims() == {0: 1, 1: 1}


def test_flip_square_brute_force_comparison():
    # Count invariant pairs directly from a basis with degrees.
    for degrees in ([0, 2, 3], [0, 1, 1, 4], [0, 5]):
        s_dims: dict[int, int] = {}
        for d in degrees:
            s_dims[d] = s_dims.get(d, 0) + 1
        expected: dict[int, int] = {}
        for i, di in enumerate(degrees):
            for j, dj in enumerate(degrees):
                if i < j:
                    expected[di + dj] = expected.get(di + dj, 0) + 1
                elif i == j and di % 2 == 0:
                    expected[2 * di] = expected.get(2 * di, 0) + 1
        got = flip_symmetric_square(PoincareSeries.from_dims(s_dims)).dims()
        assert got == expected


def test_registry_examples():
    assert registry_lookup("AutF4").series.dims() == {0: 1, 4: 1}
    assert registry_lookup("RoseCentralizerCore_n=l+3").series.dims() == {0: 1, 4: 1}
    assert registry_lookup("OutF7").series.dims() == {0: 1, 8: 1, 11: 1}
    entry = registry_lookup("F4SemidirectAutF4_Z2invariants")
    assert entry.status == "unknown" and entry.series is None


def test_registry_unknown_poisons():
    with pytest.raises(UnknownCohomology) as info:
        series_of(Product((Finite(), RegistryRef("F4SemidirectAutF4_Z2invariants"))))
    assert info.value.name == "F4SemidirectAutF4_Z2invariants"


def test_registry_no_such_entry():
    with pytest.raises(NoSuchEntry):
        registry_lookup("NotARealEntryName")


def test_registry_dynamic_unknowns():
    assert registry_lookup("AutF9").status == "unknown"
    assert registry_lookup("OutF12").status == "unknown"
    assert registry_lookup("F6SemidirectAutF6_Z2invariants").status == "unknown"
    # Below the thresholds the explicit entries (or nothing) decide.
    with pytest.raises(NoSuchEntry):
        registry_lookup("OutF1")


def test_registry_citations_nonempty():
    registry = default_registry()
    for name in registry.names():
        entry = registry.lookup(name)
        if entry.known:
            assert entry.citation.strip()


def test_registry_version_and_roundtrip(tmp_path):
    registry = default_registry()
    assert registry.version >= 1
    custom = {
        "version": 2,
        "entries": {
            "TestEntry": {"status": "known", "dims": {"0": 1, "2": 3}, "citation": "x"}
        },
    }
    loaded = Registry.from_json_text(json.dumps(custom))
    assert loaded.lookup("TestEntry").series.dims() == {0: 1, 2: 3}


def test_registry_rejects_bad_entries():
    with pytest.raises(ValueError):
        Registry.from_json_text(
            json.dumps({"version": 1, "entries": {"X": {"status": "odd"}}})
        )
    with pytest.raises(ValueError):
        Registry.from_json_text(
            json.dumps(
                {"version": 1, "entries": {"X": {"status": "known", "dims": {"0": 1}}}}
            )
        )
    with pytest.raises(ValueError):
        Registry.from_json_text(
            json.dumps(
                {
                    "version": 1,
                    "entries": {
                        "X": {"status": "unknown", "dims": {"0": 1}, "citation": "x"}
                    },
                }
            )
        )


def test_citations_of_walks_expressions():
    expr = Product((Finite(), RegistryRef("AutF4"), FlipSquare(RegistryRef("AutF2"))))
    cites = citations_of(expr)
    assert len(cites) == 2
    assert any("Gerlits" in c for c in cites)
