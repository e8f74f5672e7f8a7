"""Complex torus C/(Z + tau Z) with Weierstrass-function numerics.

zeta, wp and its derivatives are evaluated by summing lattice rows in
closed cotangent form, so the truncation error decays like
exp(-2 pi N Im tau) for N summed rows.  The quasi-period constants eta1,
eta2 are cached at construction and certified by the Legendre relation
eta1*tau - eta2 = 2 pi i to 1e-10; failing that check aborts construction.

Closed meromorphic 1-forms on the torus are combinations
    c0 dz + sum r_j zeta(z - p_j) dz + sum c_k wp^{(l_k - 2)}(z - p_k) dz,
elliptic exactly when sum r_j = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

TWO_PI_I = 2j * math.pi
LATTICE_MARGIN = 1e-8
LEGENDRE_TOL = 1e-10


class TorusError(ValueError):
    pass


def _cot_pi(w):
    """cot(pi w), overflow-safe for any imaginary part (vectorized)."""
    w = np.asarray(w, dtype=complex)
    flip = w.imag < 0
    w_safe = np.where(flip, -w, w)
    q = np.exp(2j * math.pi * w_safe)  # |q| <= 1 on the safe side
    cot = 1j * (q + 1.0) / (q - 1.0)
    return np.where(flip, -cot, cot)


def _csc2_pi(w):
    """1/sin^2(pi w), overflow-safe (vectorized)."""
    w = np.asarray(w, dtype=complex)
    w_safe = np.where(w.imag < 0, -w, w)
    q = np.exp(2j * math.pi * w_safe)
    return -4.0 * q / (q - 1.0) ** 2


@lru_cache(maxsize=None)
def _cot_poly(k: int) -> Tuple[int, ...]:
    """Integer coefficients (constant first) of Q_k(u) with
    d^k/dw^k csc^2(pi w) = pi^k Q_k(cot(pi w));  Q_0 = 1 + u^2,
    Q_{k+1} = -(1+u^2) Q_k'."""
    if k == 0:
        return (1, 0, 1)
    prev = _cot_poly(k - 1)
    deriv = tuple(c * (i + 1) for i, c in enumerate(prev[1:]))
    out = [0] * (len(deriv) + 2)
    for i, c in enumerate(deriv):
        out[i] -= c
        out[i + 2] -= c
    return tuple(out)


def _poly_eval(coeffs: Sequence[int], u):
    acc = np.zeros_like(u) if isinstance(u, np.ndarray) else 0j
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


class Torus:
    """The lattice Z + tau Z (Im tau > 0) with cached quasi-periods."""

    def __init__(self, tau: complex, cutoff: int = 30):
        tau = complex(tau)
        if not tau.imag > 0:
            raise TorusError(f"tau must have positive imaginary part, got {tau}")
        if cutoff < 4:
            raise TorusError("lattice-row cutoff must be at least 4")
        self.tau = tau
        self.cutoff = int(cutoff)
        self._rows = np.arange(-self.cutoff, self.cutoff + 1)
        # row-sum corrections reused by zeta/wp
        n_pos = np.arange(1, self.cutoff + 1)
        self._csc2_rows = _csc2_pi(n_pos * tau)  # 1/sin^2(pi n tau), n >= 1
        self._csc2_sum = complex(self._csc2_rows.sum())
        self._row_offsets = n_pos * tau
        self.eta1 = 2.0 * complex(self._zeta_raw(0.5))
        self.eta2 = 2.0 * complex(self._zeta_raw(tau / 2.0))
        defect = abs(self.eta1 * tau - self.eta2 - TWO_PI_I)
        if defect > LEGENDRE_TOL:
            raise TorusError(
                f"Legendre self-check failed: |eta1 tau - eta2 - 2 pi i| = {defect:.3e}; "
                "raise the cutoff or move tau away from the real axis"
            )

    # -- lattice geometry -------------------------------------------------

    def reduce_point(self, z: complex) -> Tuple[complex, int, int]:
        """z = z0 + m + n tau with z0 = s + t tau, s, t in [0, 1)."""
        z = complex(z)
        t = z.imag / self.tau.imag
        n = math.floor(t)
        s = z.real - t * self.tau.real
        m = math.floor(s)
        z0 = z - m - n * self.tau
        return z0, m, n

    def lattice_distance(self, z: complex) -> float:
        """Distance from z to the nearest lattice point."""
        z0, _, _ = self.reduce_point(z)
        best = math.inf
        for m in (-1, 0, 1):
            for n in (-1, 0, 1):
                best = min(best, abs(z0 - m - n * self.tau))
        return best

    def translate_distance(self, z: complex, w: complex) -> float:
        """Distance from z to the orbit w + lattice."""
        return self.lattice_distance(z - w)

    def _check_off_lattice(self, z):
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        t = arr.imag / self.tau.imag
        n = np.floor(t)
        s = arr.real - t * self.tau.real
        reduced = arr - np.floor(s) - n * self.tau
        best = np.full(reduced.shape, np.inf)
        for mm in (-1, 0, 1):
            for nn in (-1, 0, 1):
                best = np.minimum(best, np.abs(reduced - mm - nn * self.tau))
        if np.any(best < LATTICE_MARGIN):
            bad = np.asarray(arr)[best < LATTICE_MARGIN].ravel()[0]
            raise TorusError(f"point {bad} is within {LATTICE_MARGIN} of a lattice point")

    # -- Weierstrass values -----------------------------------------------

    def _zeta_raw(self, z):
        """Row-summed zeta on points already inside the convergence window."""
        z = np.asarray(z, dtype=complex)
        pi = math.pi
        offs = self._row_offsets.reshape((-1,) + (1,) * z.ndim)
        rows = _cot_pi(z[None, ...] - offs) + _cot_pi(z[None, ...] + offs)
        return (
            pi * _cot_pi(z)
            + (pi * pi / 3.0) * z
            + pi * rows.sum(axis=0)
            + 2.0 * (pi * pi) * self._csc2_sum * z
        )

    def _reduce_array(self, arr: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        t = arr.imag / self.tau.imag
        n = np.floor(t)
        s = arr.real - t * self.tau.real
        m = np.floor(s)
        return arr - m - n * self.tau, m, n

    def zeta(self, z):
        """Weierstrass zeta; quasi-periodic with drops eta1, eta2."""
        self._check_off_lattice(z)
        scalar = np.isscalar(z) or isinstance(z, complex)
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        reduced, m, n = self._reduce_array(arr)
        out = self._zeta_raw(reduced) + m * self.eta1 + n * self.eta2
        return complex(out.ravel()[0]) if scalar else out

    def wp_deriv(self, z, k: int = 0):
        """k-th derivative of wp (k = 0 gives wp itself), elliptic."""
        self._check_off_lattice(z)
        scalar = np.isscalar(z) or isinstance(z, complex)
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        reduced, _, _ = self._reduce_array(arr)
        pi = math.pi
        coeffs = _cot_poly(k)
        w = reduced[None, ...] - (self._rows[:, None] * self.tau).reshape(
            (-1,) + (1,) * reduced.ndim
        )
        u = _cot_pi(w)
        total = (pi ** (k + 2)) * _poly_eval(coeffs, u).sum(axis=0)
        if k == 0:
            total = total - (pi * pi / 3.0) - 2.0 * (pi * pi) * self._csc2_sum
        return complex(total.ravel()[0]) if scalar else total

    def wp(self, z):
        return self.wp_deriv(z, 0)

    def wp_prime(self, z):
        return self.wp_deriv(z, 1)

    def weierstrass_fns(self, z) -> Tuple[complex, complex, complex]:
        """(wp, wp', zeta) at one point."""
        return self.wp(z), self.wp_prime(z), self.zeta(z)

    def __repr__(self):
        return f"Torus(tau={self.tau!r}, cutoff={self.cutoff})"


RESIDUE_SUM_TOL = 1e-12


@dataclass(frozen=True)
class EllipticForm:
    """Closed meromorphic 1-form on a torus:
    (c0 + sum r zeta(z-p) + sum c wp^{(l-2)}(z-p)) dz."""

    torus: Torus
    c0: complex = 0j
    log_terms: Tuple[Tuple[complex, complex], ...] = ()
    second_terms: Tuple[Tuple[complex, int, complex], ...] = ()
    validate: bool = True

    def __post_init__(self):
        logs = tuple(
            (self.torus.reduce_point(p)[0], complex(r)) for p, r in self.log_terms
        )
        seconds = []
        for p, order, c in self.second_terms:
            if order < 2:
                raise TorusError("second-kind term needs pole order >= 2")
            seconds.append((self.torus.reduce_point(p)[0], int(order), complex(c)))
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "log_terms", logs)
        object.__setattr__(self, "second_terms", tuple(seconds))
        if self.validate:
            total = sum((r for _, r in logs), 0j)
            if abs(total) > RESIDUE_SUM_TOL:
                raise TorusError(
                    f"zeta-term coefficients sum to {total:.3e}; the combination "
                    "is not doubly periodic"
                )

    # -- structure ---------------------------------------------------------

    def poles(self) -> List[Tuple[complex, int]]:
        orders: dict = {}
        for p, r in self.log_terms:
            if r != 0:
                orders[p] = max(orders.get(p, 0), 1)
        for p, order, c in self.second_terms:
            if c != 0:
                orders[p] = max(orders.get(p, 0), order)
        return sorted(orders.items(), key=lambda kv: (kv[0].real, kv[0].imag))

    def residue_at(self, p: complex) -> complex:
        """Classical residue, exact from the stored structure."""
        p = self.torus.reduce_point(p)[0]
        return sum((r for q, r in self.log_terms if abs(q - p) < 1e-12), 0j)

    def is_zero(self) -> bool:
        return (
            self.c0 == 0
            and all(r == 0 for _, r in self.log_terms)
            and all(c == 0 for _, _, c in self.second_terms)
        )

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "EllipticForm") -> "EllipticForm":
        if other.torus is not self.torus:
            raise TorusError("forms live on different tori")
        return EllipticForm(
            self.torus,
            self.c0 + other.c0,
            self.log_terms + other.log_terms,
            self.second_terms + other.second_terms,
            validate=False,
        )

    def scale(self, a: complex) -> "EllipticForm":
        a = complex(a)
        return EllipticForm(
            self.torus,
            a * self.c0,
            tuple((p, a * r) for p, r in self.log_terms),
            tuple((p, o, a * c) for p, o, c in self.second_terms),
            validate=False,
        )

    def __sub__(self, other: "EllipticForm") -> "EllipticForm":
        return self + other.scale(-1.0)

    # -- evaluation -----------------------------------------------------------

    def eval_complex(self, z):
        """Coefficient function value at complex scalar / array arguments."""
        scalar = np.isscalar(z) or isinstance(z, complex)
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.full(arr.shape, self.c0, dtype=complex)
        for p, r in self.log_terms:
            if r != 0:
                out = out + r * self.torus.zeta(arr - p)
        for p, order, c in self.second_terms:
            if c != 0:
                out = out + c * self.torus.wp_deriv(arr - p, order - 2)
        return complex(out.ravel()[0]) if scalar else out


def third_kind_torus(torus: Torus, p: complex, q: complex) -> EllipticForm:
    """(zeta(z-p) - zeta(z-q)) dz: simple poles at p, q, residues +1, -1."""
    p0 = torus.reduce_point(p)[0]
    q0 = torus.reduce_point(q)[0]
    if abs(p0 - q0) < 1e-12:
        raise TorusError("third-kind form needs distinct poles modulo the lattice")
    return EllipticForm(torus, 0j, ((p0, 1.0 + 0j), (q0, -1.0 + 0j)))


def second_kind_torus(torus: Torus, p: complex, order: int) -> EllipticForm:
    """wp^{(order-2)}(z-p) dz: one pole of the given order, residue zero."""
    if order < 2:
        raise TorusError("second-kind pole order must be >= 2")
    return EllipticForm(torus, 0j, (), ((p, order, 1.0 + 0j),))


def holomorphic_torus(torus: Torus, c: complex = 1.0) -> EllipticForm:
    return EllipticForm(torus, complex(c))


def _fmt_complex(z: complex) -> str:
    sign = "-" if z.imag < 0 else "+"
    return f"{z.real!r} {sign} {abs(z.imag)!r} i"


def format_elliptic_form_text(form: EllipticForm) -> str:
    """Torus form file: `c0 = ...`, `log pole : coeff`, `pp pole : order : coeff`."""
    lines = ["torus-form", f"c0 = {_fmt_complex(form.c0)}"]
    for p, r in sorted(form.log_terms, key=lambda t: (t[0].real, t[0].imag)):
        lines.append(f"log {_fmt_complex(p)} : {_fmt_complex(r)}")
    for p, order, c in sorted(form.second_terms, key=lambda t: (t[0].real, t[0].imag, t[1])):
        lines.append(f"pp {_fmt_complex(p)} : {order} : {_fmt_complex(c)}")
    return "\n".join(lines) + "\n"


def parse_elliptic_form_text(text: str, torus: Torus) -> EllipticForm:
    from .exact import parse_exact

    c0 = 0j
    logs = []
    seconds = []
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body == "torus-form":
            saw_header = True
            continue
        try:
            if body.startswith("c0"):
                c0 = parse_exact(body.split("=", 1)[1]).to_complex()
            elif body.startswith("log"):
                pole, coeff = body[3:].split(":", 1)
                logs.append((parse_exact(pole).to_complex(), parse_exact(coeff).to_complex()))
            elif body.startswith("pp"):
                pole, order, coeff = body[2:].split(":", 2)
                seconds.append(
                    (
                        parse_exact(pole).to_complex(),
                        int(order.strip()),
                        parse_exact(coeff).to_complex(),
                    )
                )
            else:
                raise TorusError(f"line {lineno}: unknown directive {body!r}")
        except (IndexError, ValueError) as e:
            if isinstance(e, TorusError):
                raise
            raise TorusError(f"line {lineno}: {e}") from None
    if not saw_header:
        raise TorusError("missing `torus-form` header")
    return EllipticForm(torus, c0, tuple(logs), tuple(seconds))


def parse_torus_text(text: str) -> Torus:
    """`tau = a+bi` and optional `cutoff = N` lines."""
    tau = None
    cutoff = 30
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise TorusError(f"line {lineno}: expected `key = value`")
        key, val = (part.strip() for part in body.split("=", 1))
        if key == "tau":
            from .exact import parse_exact

            tau = parse_exact(val).to_complex()
        elif key == "cutoff":
            cutoff = int(val)
        else:
            raise TorusError(f"line {lineno}: unknown key {key!r}")
    if tau is None:
        raise TorusError("missing `tau = a+bi` line")
    return Torus(tau, cutoff)
