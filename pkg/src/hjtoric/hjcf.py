"""Hirzebruch-Jung (minus-sign) continued fractions.

A fraction ``0 < p/q < 1`` is written uniquely as
``p/q = 1/(e1 - 1/(e2 - ... - 1/ek))`` with every ``ei >= 2``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import InvalidFraction


def check_fraction(p: int, q: int) -> None:
    for x in (p, q):
        if isinstance(x, bool) or not isinstance(x, int):
            raise InvalidFraction(f"expected integers, got {p!r}/{q!r}")
    if not 0 < p < q:
        raise InvalidFraction(f"need 0 < p < q, got {p}/{q}")
    if gcd(p, q) != 1:
        raise InvalidFraction(f"{p}/{q} is not reduced")


def hj_expand(p: int, q: int) -> list[int]:
    """Digits ``[e1, ..., ek]`` of ``p/q``.

    Uses ``e = ceil(q/p)`` then ``(p, q) <- (e*p - q, p)`` until the
    remainder vanishes.
    """
    check_fraction(p, q)
    digits = []
    while p:
        e = -(-q // p)
        digits.append(e)
        p, q = e * p - q, p
    return digits


def _check_digits(digits: Sequence[int]) -> list[int]:
    digits = list(digits)
    if not digits:
        raise InvalidFraction("empty expansion")
    for e in digits:
        if isinstance(e, bool) or not isinstance(e, int) or e < 2:
            raise InvalidFraction(f"expansion digits must be integers >= 2, got {digits}")
    return digits


def hj_evaluate(digits: Sequence[int]) -> tuple[int, int]:
    """Inverse of :func:`hj_expand`, evaluated bottom-up."""
    digits = _check_digits(digits)
    value = Fraction(0)
    for e in reversed(digits):
        value = 1 / (e - value)
    return value.numerator, value.denominator


def nested_fraction(digits: Sequence[int]) -> str:
    """Render ``[2, 3]`` as ``1/(2 - 1/3)``."""
    digits = _check_digits(digits)
    text = f"1/{digits[-1]}"
    for e in reversed(digits[:-1]):
        text = f"1/({e} - {text})"
    return text


def dual_digits(p: int, q: int) -> list[int]:
    """Digits of the complementary weight ``(q - p)/q``."""
    check_fraction(p, q)
    return hj_expand(q - p, q)
