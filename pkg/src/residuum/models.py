"""Model handles for the two concrete geometries and form dispatch.

A model handle pins down the geometry a garden lives on: the sphere
(exact rational forms) or a torus (Weierstrass numerics).  Component
points and 1-forms are named/constructed uniformly through these
handles so the period engine can stay geometry-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple, Union

from .divisor import CDivisor
from .exact import ExactComplex
from . import sphere as sph
from . import torus as tor
from .sphere import RationalForm, SpherePoint
from .torus import EllipticForm, Torus


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class SphereModel:
    tag = "sphere"
    b1 = 0

    def parse_point(self, text: str) -> SpherePoint:
        return sph.parse_sphere_point(text)

    def point_name(self, point) -> str:
        return str(SpherePoint.coerce(point))


@dataclass(frozen=True)
class TorusModel:
    torus: Torus
    tag = "torus"
    b1 = 2

    def parse_point(self, text: str) -> complex:
        from .exact import parse_exact

        return self.torus.reduce_point(parse_exact(text).to_complex())[0]

    def point_name(self, point: complex) -> str:
        z = self.torus.reduce_point(complex(point))[0]
        re = repr(z.real)
        im = repr(abs(z.imag))
        sign = "-" if z.imag < 0 else "+"
        return f"{re} {sign} {im} i"


Model = Union[SphereModel, TorusModel]
Form = Union[RationalForm, EllipticForm]


def zero_form(model: Model) -> Form:
    if isinstance(model, SphereModel):
        return RationalForm.zero()
    return EllipticForm(model.torus, 0j)


def third_kind(model: Model, p, q) -> Form:
    """Simple poles at p, q with residues +1, -1 on either model."""
    if isinstance(model, SphereModel):
        return sph.third_kind(p, q)
    return tor.third_kind_torus(model.torus, complex(p), complex(q))


def second_kind(model: Model, p, order: int) -> Form:
    """A single residue-free pole of the given order >= 2."""
    if isinstance(model, SphereModel):
        return sph.second_kind(p, order)
    return tor.second_kind_torus(model.torus, complex(p), order)


def prescribe_residues(model: Model, divisor: CDivisor) -> Form:
    """Form with the prescribed residue divisor (coefficients sum to zero:
    exactly on the sphere, within 1e-12 on the torus)."""
    if isinstance(model, SphereModel):
        return sph.prescribe_residues(divisor)
    torus = model.torus
    coeffs = [a.to_complex() for a in divisor.coefficients]
    total = sum(coeffs, 0j)
    if abs(total) > tor.RESIDUE_SUM_TOL:
        raise ModelError(
            f"residue coefficients sum to {total:.3e}; no closed meromorphic "
            "1-form on the torus can carry this divisor"
        )
    points = [model.parse_point(name) for name in divisor.components]
    log_terms = tuple((p, c) for p, c in zip(points, coeffs) if c != 0)
    return EllipticForm(torus, 0j, log_terms)


def residue_divisor(model: Model, form: Form) -> CDivisor:
    """Residue divisor of a form, named through the model handle."""
    if isinstance(model, SphereModel):
        return sph.residue_divisor(form)
    pairs: List[Tuple[str, ExactComplex]] = []
    for p, _ in form.poles():
        r = form.residue_at(p)
        if r != 0:
            pairs.append((model.point_name(p), ExactComplex.from_complex(r)))
    return CDivisor.from_pairs(pairs)


def form_poles(model: Model, form: Form):
    """Pole points with orders, in model-native point types."""
    if isinstance(model, SphereModel):
        return sph.all_poles(form)
    return form.poles()


def parse_form_for_model(text: str, model: Model) -> Form:
    if isinstance(model, SphereModel):
        return sph.parse_form_text(text)
    return tor.parse_elliptic_form_text(text, model.torus)


def format_form_for_model(form: Form, model: Model) -> str:
    if isinstance(model, SphereModel):
        return sph.format_form_text(form)
    return tor.format_elliptic_form_text(form)
