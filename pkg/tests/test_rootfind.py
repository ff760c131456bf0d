import math

import pytest
from hypothesis import given, strategies as st

from hardymeans.errors import BracketError, NoBracketError
from hardymeans.rootfind import RootResult, bracketed_root, expand_bracket_up


def test_cosine_root():
    res = bracketed_root(math.cos, 0.0, 3.0)
    assert abs(res.root - math.pi / 2.0) < 1e-12
    assert abs(res.residual) < 1e-12
    assert res.bracket == (0.0, 3.0)
    assert res.iterations >= 1


def test_endpoint_zero_short_circuits():
    res = bracketed_root(lambda x: x, 0.0, 1.0)
    assert res == RootResult(0.0, 0.0, (0.0, 1.0), 0)


def test_no_sign_change_raises():
    with pytest.raises(BracketError):
        bracketed_root(lambda x: x * x + 1.0, 0.0, 1.0)


def test_xtol_controls_accuracy():
    res = bracketed_root(math.sin, 3.0, 3.3, xtol=1e-14)
    assert abs(res.root - math.pi) < 1e-13


def test_expand_bracket_finds_decreasing_crossing():
    lo, hi = expand_bracket_up(lambda c: 10.0 - c)
    assert lo < 10.0 <= hi
    assert (10.0 - lo) * (10.0 - hi) <= 0.0


def test_expand_bracket_gives_up_at_cap():
    with pytest.raises(NoBracketError):
        expand_bracket_up(lambda c: 1.0, cap=1e3)


def test_expand_then_solve_composes():
    f = lambda c: math.log(1e6) - math.log(c)
    lo, hi = expand_bracket_up(f)
    res = bracketed_root(f, lo, hi)
    assert abs(res.root - 1e6) < 1e-4


@given(st.floats(min_value=-50.0, max_value=50.0))
def test_cubic_roots(t):
    res = bracketed_root(lambda x: x ** 3 - t, -4.0, 4.0)
    assert abs(res.root - math.copysign(abs(t) ** (1.0 / 3.0), t)) < 1e-9
