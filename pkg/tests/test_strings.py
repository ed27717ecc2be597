from fractions import Fraction

import pytest

from padic_strings import (
    PAdicBall,
    SelfSimilarSystem,
    ball_relation,
    BallRelation,
    cantor_string_3,
    enumerate_intervals,
    euler_string,
    explicit_spectrum,
    fibonacci_string_2,
    format_ball,
    haar_measure,
    parse_ball,
    real_cantor_string,
    self_similar_spectrum,
    spectrum_of,
    total_length,
    validate_system,
)
from padic_strings.strings import RealLengthSpectrum


def brute_force_counts(sys: SelfSimilarSystem, max_weight: int) -> dict[int, int]:
    """Oracle: count every (word, gap) pair explicitly, no recurrences reused."""
    counts: dict[int, int] = {}

    def visit(weight: int):
        for m in sys.gap_exps:
            if weight + m <= max_weight:
                counts[weight + m] = counts.get(weight + m, 0) + 1
        for n in sys.scaling_exps:
            if weight + n + min(sys.gap_exps) <= max_weight:
                visit(weight + n)

    visit(0)
    return counts


def test_euler_string_entries():
    e = euler_string(2)
    assert e.entries_up_to(4) == [(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]
    assert total_length(e) == 2
    assert total_length(euler_string(3)) == Fraction(3, 2)
    assert e.first_entries(1) == [(0, 1)]


def test_cantor_string_construction(cantor3):
    assert cantor3.p == 3
    assert cantor3.scaling_exps == (1, 1) and cantor3.gap_exps == (1,)
    assert cantor3.d == 1 and cantor3.r == Fraction(1, 3)
    assert spectrum_of(cantor3).entries_up_to(3) == [(1, 1), (2, 2), (3, 4)]
    assert sum(cantor3.ratios()) + sum(cantor3.gap_lengths()) == 1
    assert validate_system(cantor3).valid


def test_fibonacci_string_construction(fibonacci2):
    assert fibonacci2.p == 2
    assert fibonacci2.scaling_exps == (1, 2) and fibonacci2.gap_exps == (2,)
    assert fibonacci2.d == 1
    assert spectrum_of(fibonacci2).entries_up_to(6) == [(2, 1), (3, 1), (4, 2), (5, 3), (6, 5)]
    assert sum(fibonacci2.ratios()) + sum(fibonacci2.gap_lengths()) == 1


def test_fibonacci_multiplicities_follow_recursion(fibonacci2):
    entries = dict(spectrum_of(fibonacci2).entries_up_to(31))
    fib = [0, 1]
    for _ in range(31):
        fib.append(fib[-1] + fib[-2])
    for m in range(1, 30):
        assert entries.get(m + 1, 0) == fib[m]


def test_self_similar_spectrum_against_brute_force(cantor3, fibonacci2):
    for sys in (cantor3, fibonacci2):
        ls = self_similar_spectrum(sys, 9)
        assert dict(ls.entries_up_to(9)) == brute_force_counts(sys, 9)


def test_spectrum_has_no_entry_below_smallest_gap(fibonacci2):
    assert spectrum_of(fibonacci2).entries_up_to(1) == []


def test_enumerate_intervals_examples(cantor3, fibonacci2):
    got = enumerate_intervals(cantor3, 2)
    assert [format_ball(b) for b in got] == ["1+3^1*Z", "3+3^2*Z", "5+3^2*Z"]
    fib = {format_ball(b) for b in enumerate_intervals(fibonacci2, 3)}
    assert {"12+2^4*Z", "13+2^4*Z", "3+2^2*Z", "6+2^3*Z"} <= fib
    assert enumerate_intervals(cantor3, 0) == []


def test_enumerate_intervals_requires_maps():
    bare = SelfSimilarSystem(3, (1, 1), (1,))
    with pytest.raises(ValueError):
        enumerate_intervals(bare, 2)


def test_enumerated_measures_aggregate_to_spectrum(cantor3, fibonacci2):
    for sys in (cantor3, fibonacci2):
        depth = 5
        balls = enumerate_intervals(sys, depth)
        by_exp: dict[int, Fraction] = {}
        for b in balls:
            by_exp[b.radius_exp] = by_exp.get(b.radius_exp, Fraction(0)) + haar_measure(b)
        # true prefix: scales fully enumerated at this depth
        full_scale = depth * min(sys.scaling_exps) + min(sys.gap_exps) - 1
        for n, m in spectrum_of(sys).entries_up_to(full_scale):
            assert by_exp.get(n) == Fraction(m, sys.p**n)
        for i in range(len(balls)):
            for j in range(i + 1, len(balls)):
                assert ball_relation(balls[i], balls[j]) is BallRelation.DISJOINT


def test_validate_system_violations():
    assert validate_system(cantor_string_3()).valid
    no_gap = SelfSimilarSystem(2, (1, 1), ())
    rep = validate_system(no_gap)
    assert not rep.valid and any("gap" in v or "< 1" in v for v in rep.violations)
    bad_sum = SelfSimilarSystem(2, (1, 2), (1,))
    rep = validate_system(bad_sum)
    assert not rep.valid and any("gap identity" in v for v in rep.violations)


def test_total_length_values(cantor3, fibonacci2):
    assert total_length(spectrum_of(cantor3)) == 1
    assert total_length(spectrum_of(fibonacci2)) == 1
    assert total_length(euler_string(2)) == 2


def test_cantor_truncated_total(cantor3):
    ls = spectrum_of(cantor3)
    for n in range(0, 15):
        assert ls.head_length(n) == 1 - Fraction(2, 3) ** n
        lo, hi = ls.total_prefix_bounds(n)
        assert lo <= 1 <= hi and hi - lo == Fraction(2, 3) ** n


def test_explicit_spectrum_checks():
    ls = explicit_spectrum(5, [(0, 1), (2, 3)])
    assert total_length(ls) == 1 + Fraction(3, 25)
    assert ls.tail_length(1) == Fraction(3, 25)
    with pytest.raises(ValueError):
        explicit_spectrum(5, [(2, 1), (1, 1)])  # not increasing
    with pytest.raises(ValueError):
        explicit_spectrum(5, [(1, 0)])  # zero multiplicity


def test_system_json_round_trip(cantor3, fibonacci2):
    for sys in (cantor3, fibonacci2, SelfSimilarSystem(5, (1, 1, 2), (1, 2, 2))):
        text = sys.to_json()
        again = SelfSimilarSystem.from_json(text)
        assert again == sys
        assert again.to_json() == text  # bit-exact round trip


def test_real_cantor_spectrum():
    rls = real_cantor_string()
    assert rls.total() == 1
    assert rls.count_at_least(Fraction(1, 9)) == 3
    assert rls.tail_below(Fraction(1, 9)) == Fraction(4, 9)
    explicit = RealLengthSpectrum(((Fraction(1, 2), 1), (Fraction(1, 4), 3)))
    assert explicit.total() == Fraction(1, 2) + Fraction(3, 4)
    with pytest.raises(ValueError):
        RealLengthSpectrum(((Fraction(1, 4), 1), (Fraction(1, 2), 1)))
