from __future__ import annotations

import math
from fractions import Fraction

import pytest

from copshield.bounds import (alpha_value, bound_report, ceil_log2, epsilon_c, log2_f, t_alpha, theorem1_exponent,
                              theorem2_k, theorem2_k_from_log2, theorem2_radicand)
from copshield.errors import DomainError


def test_log2_f_hand_values():
    assert log2_f(2, 2) == 1025
    assert log2_f(4, 2) == 2308


@pytest.mark.parametrize("k", range(2, 17))
def test_log2_f_increasing_in_d(k):
    vals = [log2_f(k, d) for d in range(2, 17)]
    assert vals == sorted(vals) and len(set(vals)) == len(vals)


@pytest.mark.parametrize("k,d", [(k, d) for k in range(2, 17) for d in range(2, 17)])
def test_log2_f_matches_formula(k, d):
    lk = math.log2(k)
    expected = lk * lk + 256 * math.log2(k * d) * (math.log2(lk) + d)
    assert math.isclose(log2_f(k, d), expected, rel_tol=1e-12)


def test_t_and_alpha():
    t, la = t_alpha(2, 2, 16)
    assert t == 3
    assert math.isclose(2**la, 96 * math.log2(96), rel_tol=1e-12)
    assert math.isclose(la, 9.304, abs_tol=1e-3)
    assert ceil_log2(8) == 3 and ceil_log2(9) == 4
    assert alpha_value(2, 2, 16) == pytest.approx(96 * math.log2(96))


def test_epsilon_c_exact_and_monotone():
    assert epsilon_c(1) == (10, False)
    assert epsilon_c(Fraction(1, 2)) == (1297, False)
    assert epsilon_c("1/3") == (9**6 + 1, False)
    vals = [epsilon_c(Fraction(1, q))[0] for q in range(1, 6)]
    assert vals == sorted(vals)
    c, ceiled = epsilon_c(Fraction(2, 3))
    assert ceiled and c == math.ceil(4.5**3) + 1


@pytest.mark.parametrize("eps", [0, -1, 2, Fraction(3, 2)])
def test_epsilon_c_domain(eps):
    with pytest.raises(DomainError):
        epsilon_c(eps)


def test_theorem2_k_clamps_at_desk_scale():
    for x in (2, 10, 1000, 10**6):
        choice = theorem2_k(x, 2)
        assert choice.k == 2 and choice.clamped
    with pytest.raises(DomainError):
        theorem2_k(1, 2)


def test_theorem2_k_unclamped_for_huge_x():
    # log2 x = 10^9: the radicand is positive and k exceeds the clamp
    assert theorem2_radicand(1e9, 2) > 0
    choice = theorem2_k_from_log2(1e9, 2)
    assert not choice.clamped and choice.k > 2


def test_theorem2_k_radicand_negative_at_ten_million_bits():
    assert theorem2_radicand(1e7, 2) < 0
    assert theorem2_k_from_log2(1e7, 2).clamped


def test_theorem2_k_never_exceeds_x():
    for x in (2, 3, 50):
        assert theorem2_k(x, 2).k <= max(x, 2)


def test_theorem1_exponent():
    assert theorem1_exponent(1) == 0.0
    assert theorem1_exponent(16) == 2.0
    with pytest.raises(DomainError):
        theorem1_exponent(0)


def test_bound_report_text_record():
    rep = bound_report(2, 2, 16, epsilon=Fraction(1, 2), vc=16)
    text = rep.to_text()
    fields = dict(line.split("=", 1) for line in text.splitlines())
    assert fields["log2_f"] == "1025.0"
    assert fields["t"] == "3"
    assert fields["epsilon_c"] == "1297"
    assert fields["theorem2_k_clamped"] == "True"
    assert "clamped" in fields["notes"]
    assert rep.t >= 1 and rep.epsilon_c >= 2
    assert all(math.isfinite(v) for v in (rep.log2_f, rep.log2_alpha, rep.theorem2_log2_bound))
