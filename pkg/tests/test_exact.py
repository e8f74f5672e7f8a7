import random
from fractions import Fraction

import pytest

from residuum.exact import ExactComplex, I, ONE, ZERO, format_exact, parse_exact


def test_basic_arithmetic():
    a = ExactComplex(Fraction(1, 2), Fraction(3, 4))
    b = ExactComplex(2, -1)
    assert a + b == ExactComplex(Fraction(5, 2), Fraction(-1, 4))
    assert a - b == ExactComplex(Fraction(-3, 2), Fraction(7, 4))
    assert ExactComplex(0, 1) * ExactComplex(0, 1) == -1
    assert (a * b) / b == a


def test_division_and_power():
    z = ExactComplex(3, 4)
    assert z / z == ONE
    assert (ONE / z) * z == ONE
    assert I ** 4 == ONE
    assert I ** 3 == -I
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_conjugate_and_predicates():
    z = ExactComplex(Fraction(2, 3), Fraction(-5, 7))
    assert z.conjugate() == ExactComplex(Fraction(2, 3), Fraction(5, 7))
    assert (z * z.conjugate()).is_real()
    assert not z.is_zero()
    assert ZERO.is_zero()


def test_random_field_axioms():
    rng = random.Random(7)

    def rand():
        return ExactComplex(
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
        )

    for _ in range(200):
        a, b, c = rand(), rand(), rand()
        assert a * (b + c) == a * b + a * c
        assert (a + b) + c == a + (b + c)
        if not b.is_zero():
            assert (a / b) * b == a


def test_to_complex_roundtrip():
    z = ExactComplex(Fraction(1, 8), Fraction(-3, 16))
    assert ExactComplex.from_complex(z.to_complex()) == z


@pytest.mark.parametrize(
    "text,value",
    [
        ("0", ZERO),
        ("3", ExactComplex(3)),
        ("-1/2", ExactComplex(Fraction(-1, 2))),
        ("i", I),
        ("-i", -I),
        ("2i", ExactComplex(0, 2)),
        ("3/4 i", ExactComplex(0, Fraction(3, 4))),
        ("1 + 2 i", ExactComplex(1, 2)),
        ("1/2 - 1/3 i", ExactComplex(Fraction(1, 2), Fraction(-1, 3))),
        ("2.5", ExactComplex(Fraction(5, 2))),
        ("0.1 + 0.25i", ExactComplex(Fraction(1, 10), Fraction(1, 4))),
    ],
)
def test_parse(text, value):
    assert parse_exact(text) == value


@pytest.mark.parametrize("bad", ["", "1 + 2", "i i", "1 + 2 + 3 i", "z", "1//2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_exact(bad)


def test_format_parse_roundtrip():
    rng = random.Random(11)
    for _ in range(100):
        z = ExactComplex(
            Fraction(rng.randint(-20, 20), rng.randint(1, 12)),
            Fraction(rng.randint(-20, 20), rng.randint(1, 12)),
        )
        assert parse_exact(format_exact(z)) == z
