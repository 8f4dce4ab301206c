"""Shared helpers for the test suite.

Random data is always drawn from a seeded random.Random so failures
reproduce; rational points keep the exact code paths exact.
"""

from fractions import Fraction
import random

import pytest

from dunklou import Polynomial, parse_group


GROUP_LABELS = ("rank1:k=1", "z2:2:k=1,0.5", "z2:3:k=1,2,0.5", "sym:3:k=1")


def rng(name: str) -> random.Random:
    """One deterministic stream per test, keyed by name."""
    return random.Random(f"dunklou:{name}")


def rational_point(r: random.Random, d: int, den: int = 7, span: int = 5):
    """Random rational point with no zero coordinate (off hyperplanes)."""
    pt = []
    for _ in range(d):
        num = 0
        while num == 0:
            num = r.randint(-span * den, span * den)
        pt.append(Fraction(num, den))
    return tuple(pt)


def off_hyperplane(rs, x) -> bool:
    """True when x avoids every reflecting hyperplane of rs."""
    from dunklou.rootsys import dot

    return all(dot(alpha, x) != 0 for alpha in rs.positive_roots)


def random_poly(r: random.Random, d: int, deg: int, terms: int = 6) -> Polynomial:
    """Random polynomial with small rational coefficients, degree <= deg."""
    coeffs = {}
    for _ in range(terms):
        mono = [0] * d
        budget = r.randint(0, deg)
        for _ in range(budget):
            mono[r.randrange(d)] += 1
        c = Fraction(r.randint(-9, 9), r.randint(1, 4))
        if c:
            coeffs[tuple(mono)] = coeffs.get(tuple(mono), Fraction(0)) + c
    coeffs = {m: c for m, c in coeffs.items() if c}
    if not coeffs:
        coeffs = {(0,) * d: Fraction(1)}
    return Polynomial(d, coeffs)


@pytest.fixture(params=GROUP_LABELS, ids=lambda s: s.replace(":", "_"))
def any_group(request):
    return parse_group(request.param)
