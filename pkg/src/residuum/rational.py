"""Exact univariate polynomials and rational functions over Q(i).

Coefficients are ExactComplex, constant term first.  Arithmetic, gcd and
Taylor manipulation are implemented directly (the field makes monic Euclid
trivial); splitting a denominator into linear factors is delegated to
sympy's Gaussian-rational factorizer.  Poles that do not lie in Q(i) cannot
be represented exactly and raise `IrrationalPoleError`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

import numpy as np
import sympy
from sympy import QQ_I

from .exact import ExactComplex, ONE, ZERO


class IrrationalPoleError(ValueError):
    """A denominator factor has no roots in Q(i)."""


class Polynomial:
    """Dense polynomial over Q(i), normalized (no trailing zero coefficients)."""

    __slots__ = ("coeffs", "_np")

    def __init__(self, coeffs: Iterable = ()):  # constant term first
        cs = [ExactComplex.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self._np = None

    # -- basics ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> ExactComplex:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-ONE)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    def scale(self, a) -> "Polynomial":
        a = ExactComplex.coerce(a)
        return Polynomial([a * c for c in self.coeffs])

    def divmod(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), self
        quot = [ZERO] * (dq + 1)
        inv_lead = ONE / other.leading()
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv_lead
            quot[k] = c
            if not c.is_zero():
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return Polynomial(quot), Polynomial(rem[: other.degree])

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(ONE / self.leading())

    def derivative(self) -> "Polynomial":
        return Polynomial([c * (i + 1) for i, c in enumerate(self.coeffs[1:])])

    def power(self, n: int) -> "Polynomial":
        out = Polynomial([ONE])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- evaluation --------------------------------------------------------

    def eval(self, z: ExactComplex) -> ExactComplex:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def eval_complex(self, z):
        """Horner evaluation at a float complex or numpy array."""
        if self._np is None:
            self._np = np.array([c.to_complex() for c in self.coeffs], dtype=complex)
        cs = self._np
        if len(cs) == 0:
            return np.zeros_like(z) if isinstance(z, np.ndarray) else 0j
        acc = np.full_like(z, cs[-1]) if isinstance(z, np.ndarray) else cs[-1]
        for c in cs[-2::-1]:
            acc = acc * z + c
        return acc

    def shift(self, p: ExactComplex) -> "Polynomial":
        """Taylor shift: returns q with q(w) = self(p + w), exact."""
        out = Polynomial([ZERO])
        for c in reversed(self.coeffs):
            out = out * Polynomial([p, ONE]) + Polynomial([c])
        return out

    def series_inverse(self, order: int) -> List[ExactComplex]:
        """First `order` coefficients of 1/self as a power series (needs
        nonzero constant term)."""
        if self.is_zero() or self.coeffs[0].is_zero():
            raise ZeroDivisionError("series inverse needs a unit constant term")
        inv0 = ONE / self.coeffs[0]
        out = [inv0]
        for n in range(1, order):
            acc = ZERO
            for k in range(1, min(n, self.degree) + 1):
                acc = acc + self.coeffs[k] * out[n - k]
            out.append(-inv0 * acc)
        return out


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def squarefree_decomposition(p: Polynomial) -> List[Tuple[Polynomial, int]]:
    """Yun's algorithm: [(factor_i, multiplicity_i)] with factors squarefree,
    pairwise coprime, product of factor^mult = monic(p)."""
    p = p.monic()
    if p.degree < 1:
        return []
    out: List[Tuple[Polynomial, int]] = []
    g = poly_gcd(p, p.derivative())
    w = p.divmod(g)[0]
    i = 1
    while w.degree >= 1:
        y = poly_gcd(w, g)
        f = w.divmod(y)[0]
        if f.degree >= 1:
            out.append((f.monic(), i))
        w = y
        g = g.divmod(y)[0]
        i += 1
    return out


_Z = sympy.symbols("z")


def _to_sympy(p: Polynomial):
    def conv(c: ExactComplex):
        return QQ_I.convert(c.re) + QQ_I.convert(c.im) * QQ_I.convert(sympy.I)

    return sympy.Poly.from_list([conv(c) for c in reversed(p.coeffs)], _Z, domain=QQ_I)


def _from_sympy_root(lin) -> ExactComplex:
    # monic linear sympy poly z + c => root -c
    c1, c0 = lin.all_coeffs()
    root = sympy.nsimplify(-c0 / c1)
    re, im = root.as_real_imag()
    return ExactComplex(Fraction(sympy.Rational(re)), Fraction(sympy.Rational(im)))


_SNAP_DENOMINATOR = 10**6


def _snap_roots(p: Polynomial) -> Optional[List[ExactComplex]]:
    """Try to split a squarefree polynomial into exact Q(i) roots by snapping
    numpy roots to nearby Gaussian rationals and verifying exactly (with
    exact deflation).  Returns None when any root refuses to snap."""
    work = p.monic()
    roots: List[ExactComplex] = []
    numeric = np.roots([c.to_complex() for c in reversed(work.coeffs)])
    for x in sorted(numeric, key=lambda v: (v.real, v.imag)):
        cand = ExactComplex(
            Fraction(float(x.real)).limit_denominator(_SNAP_DENOMINATOR),
            Fraction(float(x.imag)).limit_denominator(_SNAP_DENOMINATOR),
        )
        if work.eval(cand).is_zero():
            roots.append(cand)
            work = work.divmod(Polynomial([-cand, ONE]))[0]
    return roots if work.degree == 0 else None


def linear_roots(p: Polynomial) -> List[Tuple[ExactComplex, int]]:
    """All roots with multiplicity; raises IrrationalPoleError unless the
    polynomial splits into linear factors over Q(i).

    Fast path: exact squarefree decomposition, then numerically located
    roots snapped to Q(i) and verified by exact evaluation.  Slow path for
    anything the snap misses: sympy factorization over the Gaussian
    rationals.
    """
    if p.degree < 1:
        return []
    if p.degree == 1:
        return [(-p.coeffs[0] / p.coeffs[1], 1)]
    roots: List[Tuple[ExactComplex, int]] = []
    for factor, mult in squarefree_decomposition(p):
        snapped = _snap_roots(factor)
        if snapped is not None:
            roots.extend((r, mult) for r in snapped)
            continue
        _, sub = _to_sympy(factor).factor_list()
        for fac, m2 in sub:
            if fac.degree() == 0:
                continue
            if fac.degree() != 1:
                raise IrrationalPoleError(
                    f"factor of degree {fac.degree()} has no roots in Q(i): {fac.as_expr()}"
                )
            roots.append((_from_sympy_root(fac), mult * int(m2)))
    roots.sort(key=lambda rm: (rm[0].re, rm[0].im))
    return roots


class RationalFunction:
    """Reduced fraction num/den of Polynomials, denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial = Polynomial([ONE])):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not num.is_zero():
            g = poly_gcd(num, den)
            if g.degree >= 1:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        else:
            den = Polynomial([ONE])
        lead = den.leading()
        if lead != ONE:
            inv = ONE / lead
            num = num.scale(inv)
            den = den.scale(inv)
        self.num = num
        self.den = den

    @staticmethod
    def constant(c) -> "RationalFunction":
        return RationalFunction(Polynomial([ExactComplex.coerce(c)]))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def scale(self, a) -> "RationalFunction":
        return RationalFunction(self.num.scale(a), self.den)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, z: ExactComplex) -> ExactComplex:
        d = self.den.eval(z)
        if d.is_zero():
            raise ZeroDivisionError(f"pole at {z}")
        return self.num.eval(z) / d

    def eval_complex(self, z):
        return self.num.eval_complex(z) / self.den.eval_complex(z)

    def pole_multiplicity(self, p: ExactComplex) -> int:
        """Order of the pole at finite p (0 if regular there)."""
        if self.is_zero():
            return 0
        mult = 0
        den = self.den
        lin = Polynomial([-p, ONE])
        while True:
            q, r = den.divmod(lin)
            if not r.is_zero():
                return mult
            mult += 1
            den = q

    def poles(self) -> List[Tuple[ExactComplex, int]]:
        """Finite poles with orders (requires a Q(i)-split denominator)."""
        return linear_roots(self.den)

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"


def laurent_coefficient(fn: RationalFunction, p: ExactComplex, index: int) -> ExactComplex:
    """Exact Laurent coefficient of w^index in fn(p + w); index may be negative."""
    if fn.is_zero():
        return ZERO
    num = fn.num.shift(p)
    den = fn.den.shift(p)
    # strip the w-power from the denominator (pole order m) and numerator
    m = 0
    while den.coeffs[0].is_zero():
        den = Polynomial(den.coeffs[1:])
        m += 1
    k = 0
    while not num.is_zero() and num.coeffs[0].is_zero():
        num = Polynomial(num.coeffs[1:])
        k += 1
    # fn(p+w) = w^(k-m) * num/den with den(0) != 0
    want = index - (k - m)
    if want < 0:
        return ZERO
    inv = den.series_inverse(want + 1)
    acc = ZERO
    for j in range(want + 1):
        if j <= num.degree:
            acc = acc + num.coeffs[j] * inv[want - j]
    return acc
