import pytest

from tatek.assemble import (
    NonIntegral,
    Unknown,
    builtin_class_number,
    builtin_relative_class_number,
    emit_table,
    example_amalgam,
    example_gl,
    example_mcg,
    example_sl3,
    example_sp,
    rational_k,
    tate_k,
    weak_duality,
)
from tatek.classes import OutOfRange
from tatek.orbits import quotient_summary


def dims(result):
    return (result.dim_even, result.dim_odd)


def test_tate_examples():
    assert dims(tate_k(11, 12)) == (4, 1)
    assert dims(tate_k(5, 8)) == (7, 0)
    assert dims(tate_k(7, 6)) == (1, 0)
    assert dims(tate_k(3, 2)) == (1, 0)


def test_tate_unknown_cell():
    result = tate_k(7, 11)
    assert isinstance(result.dim_even, Unknown)
    assert isinstance(result.dim_odd, Unknown)
    assert result.dim_even.blocker == "F4SemidirectAutF4_Z2invariants"
    assert isinstance(result.weak_duality, Unknown)
    assert isinstance(result.euler_char, Unknown)


def test_tate_out_of_range_is_an_error_not_unknown():
    with pytest.raises(OutOfRange):
        tate_k(5, 9)


def test_tate_result_invariants():
    for p, n in ((5, 6), (7, 8), (11, 12), (13, 14), (5, 8), (2, 2)):
        result = tate_k(p, n)
        assert result.dim_even == sum(c.even for c in result.contributions)
        assert result.dim_odd == sum(c.odd for c in result.contributions)
        assert result.weak_duality == (result.dim_odd == 0)
        assert result.euler_char == result.dim_even - result.dim_odd


def test_contributions_itemized_phi_removal():
    for p in (5, 7, 11, 13):
        filtered = tate_k(p, p + 1, class_filter=lambda c: c.kind != "phi")
        assert dims(filtered) == (3, 0)


def test_rational_examples():
    assert dims(rational_k(5, 7)) == (5, 1)
    assert dims(rational_k(7, 4)) == (2, 0)
    assert dims(rational_k(5, 6)) == (6, 0)
    assert dims(rational_k(2, 2)) == (5, 0)


def test_rational_unknown_propagation():
    result = rational_k(11, 12)
    # The Tate part is known but H^*(Out(F_12); Q) is not.
    assert (result.tate.dim_even, result.tate.dim_odd) == (4, 1)
    assert isinstance(result.dim_even, Unknown)
    assert result.dim_even.blocker == "OutF12"


def test_weak_duality_examples():
    assert weak_duality(5, 6) is True
    assert weak_duality(13, 14) is False
    assert weak_duality(7, 10) is True


def test_weak_duality_pattern():
    for p in (5, 7, 11, 13, 17, 19, 23):
        for n in (p - 1, p, p + 2):
            assert weak_duality(p, n) is True, (p, n)
        if p >= 7:
            assert weak_duality(p, p + 3) is True
        assert weak_duality(p, p + 1) is (p in (5, 7))


def test_thm_even_dim_four_at_rank_p_plus_one():
    for p in (5, 7, 11, 13, 17, 19, 23):
        result = tate_k(p, p + 1)
        assert result.dim_even == 4
        assert result.dim_odd == quotient_summary(p).betti_one


def test_sl3():
    p2, p3 = example_sl3()
    assert dims(p2) == (4, 0)
    assert dims(p3) == (2, 0)
    assert p2.weak_duality is True and p3.weak_duality is True


def test_gl_family():
    for p, h in ((5, 1), (7, 1), (11, 2), (13, 3)):
        result = example_gl(p, h)
        expected = h * 2 ** ((p - 5) // 2)
        assert dims(result) == (expected, expected)
        assert result.euler_char == 0
        assert result.weak_duality is False


def test_sp_family():
    assert dims(example_sp(5, 1)) == (4, 0)
    assert dims(example_sp(7, 1)) == (8, 0)
    assert example_sp(11, 2).dim_even == 2 ** 5 * 2
    assert example_sp(7, 1).weak_duality is True


def test_mcg_family():
    assert example_mcg(5).dim_even == 4
    assert example_mcg(7).dim_even == 8
    assert example_mcg(11).dim_even == 20
    assert example_mcg(13).dim_even == 28
    assert example_mcg(11).weak_duality is True


def test_amalgam_family():
    assert dims(example_amalgam(5)) == (1, 3)
    assert dims(example_amalgam(3)) == (1, 1)
    assert example_amalgam(3).euler_char == 0
    assert example_amalgam(11).euler_char == -8


def test_family_input_validation():
    with pytest.raises(ValueError):
        example_gl(3)
    with pytest.raises(ValueError):
        example_sp(4)
    with pytest.raises(ValueError):
        example_amalgam(2)
    with pytest.raises(ValueError):
        example_gl(29)  # not in the bundled table, must be supplied
    with pytest.raises(ValueError):
        example_gl(5, 0)


def test_builtin_class_number_table():
    for p in (3, 5, 7, 11, 13, 17, 19):
        assert builtin_class_number(p) == 1
        assert builtin_relative_class_number(p) == 1
    assert builtin_class_number(23) == 3
    assert builtin_relative_class_number(23) == 3
    assert builtin_class_number(29) is None


def test_class_number_five_by_minkowski_bound():
    """Independent check that h = 1 for Q(zeta_5) and for Q(sqrt 5).

    Every ideal class contains an integral ideal of norm at most the
    Minkowski bound M = (n!/n^n) (4/pi)^{r_2} sqrt(|disc|); if M < 2 the
    ideal has norm 1 and the class group is trivial.

    Q(zeta_5): n = 4, r_2 = 2, disc = 125.  M < 2 is equivalent (after
    clearing denominators and squaring) to 1125 * 10^20 < 16 * 314159^4,
    using the rational lower bound pi > 3.14159.
    """
    assert 1125 * 10 ** 20 < 16 * 314159 ** 4
    # Q(sqrt 5): n = 2, r_2 = 0, disc = 5: M = sqrt(5)/2 < 2 iff 5 < 16.
    assert 5 < 16
    # Hence h_5 = 1, h(Q(sqrt 5)) = 1, and the relative number is 1/1.
    assert builtin_class_number(5) == 1
    assert builtin_relative_class_number(5) == 1


def test_mcg_divisibility_guard():
    # (p+1)(p-1) = p^2 - 1 is divisible by 24 for every prime p >= 5,
    # so the guard can only fire on a bad input path.
    for p in (5, 7, 11, 13, 17, 19, 23, 29):
        assert (p * p - 1) % 6 == 0


def test_table4_spot_cells():
    table = emit_table(4)
    assert (table.cell(8, 7).even, table.cell(8, 7).odd) == (4, 0)
    assert (table.cell(12, 11).even, table.cell(12, 11).odd) == (4, 1)
    blocked = table.cell(11, 7)
    assert blocked.status == "unknown"
    assert blocked.blocker == "F4SemidirectAutF4_Z2invariants"
    out_of_range = table.cell(12, 5)
    assert out_of_range.status == "unknown" and out_of_range.blocker is None


def test_table5_spot_cells():
    table = emit_table(5)
    assert (table.cell(2, 2).even, table.cell(2, 2).odd) == (5, 0)
    assert (table.cell(7, 5).even, table.cell(7, 5).odd) == (5, 1)
    assert (table.cell(7, 7).even, table.cell(7, 7).odd) == (4, 1)


def test_emit_table_rejects_other_numbers():
    with pytest.raises(ValueError):
        emit_table(6)


def test_mcg_nonintegral_is_unreachable_for_valid_primes():
    with pytest.raises(ValueError):
        example_mcg(4)
    assert NonIntegral is not None
