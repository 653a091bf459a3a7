"""Exact rationals with p-adic valuation and absolute value, plus multiradii."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Rational = Union[int, Fraction, str]


def as_scalar(x: Rational) -> Fraction:
    """Coerce an int, Fraction or ``"num/den"`` string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Prime(int):
    """An integer checked to be prime at construction."""

    def __new__(cls, p: int) -> "Prime":
        if isinstance(p, bool) or int(p) != p or not _is_prime(int(p)):
            raise ValueError(f"{p!r} is not a prime")
        return super().__new__(cls, int(p))


def padic_valuation(r: Rational, p: int) -> int:
    """Return v with r = p**v * u/w, u and w prime to p."""
    p = Prime(p)
    r = as_scalar(r)
    if r == 0:
        raise ValueError("valuation of zero undefined")
    v = 0
    num, den = r.numerator, r.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_abs(r: Rational, p: int) -> Fraction:
    r = as_scalar(r)
    if r == 0:
        return Fraction(0)
    return Fraction(p) ** (-padic_valuation(r, p))


def vector_abs(vec: Iterable[Rational], p: int) -> Fraction:
    """Max of coordinatewise p-adic absolute values (the norm on coefficient spaces)."""
    return max((padic_abs(c, p) for c in vec), default=Fraction(0))


class Multiradius(tuple):
    """Tuple of strictly positive rationals, one radius per variable."""

    def __new__(cls, components: Iterable[Rational]) -> "Multiradius":
        comps = tuple(as_scalar(c) for c in components)
        if not comps:
            raise ValueError("a multiradius needs at least one component")
        if any(c <= 0 for c in comps):
            raise ValueError("multiradius components must be strictly positive")
        return super().__new__(cls, comps)

    def power(self, exps: Iterable[int]) -> Fraction:
        """eps**I for a multi-index I."""
        out = Fraction(1)
        for e, k in zip(self, exps):
            out *= e**k
        return out


def _check_shrink(eps: Multiradius, eps_prime: Multiradius) -> None:
    if len(eps) != len(eps_prime):
        raise ValueError("multiradius length mismatch")
    if any(b >= a for a, b in zip(eps, eps_prime)):
        raise ValueError("not a strict shrink")


def multiradius_ratio(eps: Multiradius, eps_prime: Multiradius) -> Fraction:
    """C = max_i eps_i / eps'_i for a strict shrink eps' < eps."""
    eps, eps_prime = Multiradius(eps), Multiradius(eps_prime)
    _check_shrink(eps, eps_prime)
    return max(a / b for a, b in zip(eps, eps_prime))


def shrink_ratio(eps: Multiradius, eps_prime: Multiradius) -> Fraction:
    """min_i eps_i / eps'_i.

    This is the ratio that bounds (eps/eps')**I from below for every
    multi-index, so it is the safe constant for certifying monomial bounds.
    It coincides with :func:`multiradius_ratio` for uniform shrinks.
    """
    eps, eps_prime = Multiradius(eps), Multiradius(eps_prime)
    _check_shrink(eps, eps_prime)
    return min(a / b for a, b in zip(eps, eps_prime))


def format_scalar(x: Fraction) -> str:
    return str(x) if x.denominator != 1 else str(x.numerator)
