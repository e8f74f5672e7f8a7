"""Shared generators for randomized suites (seeded by callers)."""

import math
from fractions import Fraction

from residuum.divisor import CDivisor
from residuum.exact import ExactComplex, ONE, ZERO
from residuum.rational import Polynomial
from residuum.sphere import RationalForm


def random_split_form(rng):
    """Random rational form, denominator degree <= 8 with poles in Q(i)."""
    n_poles = rng.randint(1, 4)
    poles = rng.sample(
        [ExactComplex(a, b) for a in range(-2, 3) for b in range(-2, 3)], n_poles
    )
    form = RationalForm.zero()
    budget = 8
    for p in poles:
        max_order = min(3, budget)
        if max_order == 0:
            break
        order = rng.randint(1, max_order)
        budget -= order
        for j in range(1, order + 1):
            c = ExactComplex(
                Fraction(rng.randint(-5, 5), rng.randint(1, 3)),
                Fraction(rng.randint(-5, 5), rng.randint(1, 3)),
            )
            if not c.is_zero():
                den = Polynomial([-p, ONE]).power(j).coeffs
                form = form + RationalForm.from_coeffs([c], den)
    if rng.random() < 0.5:
        form = form + RationalForm.from_coeffs(
            [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))], [1]
        )
    return form


def random_cover_divisor(rng, force_zero_sum):
    """Random divisor on points inside the built-in sphere cover's center
    disk, keeping clear of the three band spokes."""
    n = rng.randint(2, 4)
    points = []
    while len(points) < n:
        angle = rng.choice([15, 25, 40, 100, 135, 160, 220, 250, 280, 330])
        angle += rng.randint(-10, 10)
        if min(abs(((angle - s) + 180) % 360 - 180) for s in (60, 180, 300)) < 12:
            continue
        radius = Fraction(rng.randint(8, 28), 100)
        rad = math.radians(angle)
        p = ExactComplex(
            Fraction(round(float(radius) * math.cos(rad) * 1000), 1000),
            Fraction(round(float(radius) * math.sin(rad) * 1000), 1000),
        )
        if all(p != q for q in points) and not p.is_zero():
            points.append(p)
    coeffs = [ExactComplex(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in points[:-1]]
    if force_zero_sum:
        coeffs.append(-sum(coeffs, ZERO))
    else:
        coeffs.append(ExactComplex(rng.randint(-4, 4), rng.randint(-4, 4)))
    return CDivisor.from_pairs([(str(p), c) for p, c in zip(points, coeffs)])
