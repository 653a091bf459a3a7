"""Seeded random inputs over bounded-height rationals.

All draws go through one ``random.Random`` instance, so a seed determines the
whole sequence.  A rational of height h is num/den with |num| <= h, 1 <= den <= h.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List

from .forms import Form, increasing_tuples
from .jets import Jet, monomials


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def random_rational(rng: random.Random, height: int = 5, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if x or not nonzero:
            return x


def random_jet(rng: random.Random, nvars: int, cap: int, dim: int = 1, terms: int = 4,
               height: int = 5, max_degree: int | None = None, min_degree: int = 0) -> Jet:
    """A jet with up to ``terms`` monomials of degree in [min_degree, max_degree]."""
    top = cap if max_degree is None else min(cap, max_degree)
    pool = list(monomials(nvars, top, min_degree))
    chosen = rng.sample(pool, min(terms, len(pool))) if pool else []
    return Jet(nvars, cap, {e: tuple(random_rational(rng, height) for _ in range(dim)) for e in chosen}, dim)


def random_form(rng: random.Random, nvars: int, q: int, degree: int, dim: int = 1,
                terms: int = 3, height: int = 5, cap: int | None = None) -> Form:
    cap = degree if cap is None else cap
    comps = {}
    for T in increasing_tuples(nvars, q):
        if rng.random() < 0.6:
            comps[T] = random_jet(rng, nvars, cap, dim, terms, height, max_degree=degree)
    return Form(nvars, q, comps, cap, dim)


def random_matrix(rng: random.Random, rows: int, cols: int, height: int = 5) -> List[List[Fraction]]:
    return [[random_rational(rng, height) for _ in range(cols)] for _ in range(rows)]
