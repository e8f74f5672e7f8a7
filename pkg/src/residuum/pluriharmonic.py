"""Conjugate pairs and single-valued pluriharmonic fields.

A meromorphic 1-form whose residue coefficients sum to zero gets an
anti-meromorphic conjugate: build an auxiliary meromorphic form with
conjugated residues and negated-conjugate long periods, then conjugate it
pointwise.  The sum of the pair has every loop integral cancelling, so its
path integral from the garden basepoint is a single-valued function with
logarithmic singularities, and it solves the pluriharmonic equation away
from them.

Equivalence and dimension questions about these fields reduce to finite
period data; both reductions are implemented and cross-checked
numerically (stacked period matrix rank with an explicit singular-value
gap).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .divisor import CDivisor
from .exact import ExactComplex
from .models import Form, SphereModel, TorusModel, third_kind
from .periods import (
    Garden,
    GardenError,
    Path,
    circle,
    contour_integral,
    detoured_segment,
    line,
    long_period_vector,
    period_tolerance,
    period_vectors,
    prescribe_full,
)
from .sphere import SpherePoint, residue_at
from .torus import holomorphic_torus, second_kind_torus


class PairError(ValueError):
    pass


@dataclass(frozen=True)
class AntiMeromorphicForm:
    """The pointwise conjugate of a meromorphic form.

    If the underlying form is psi(z) dz, this object stands for
    conj(psi(z)) dz-bar; its integral along any path equals the conjugate
    of the underlying form's integral along the same path.
    """

    conjugate_of: Form

    def integrate(self, path: Path, tol: float = 1e-12) -> complex:
        return contour_integral(self.conjugate_of, path, tol).conjugate()


def classical_residues(form: Form, garden: Garden) -> List[complex]:
    """Residue at each garden component (exact on the sphere, bookkept on
    the torus)."""
    out = []
    for comp in garden.components:
        if isinstance(garden.model, SphereModel):
            out.append(residue_at(form, comp).to_complex())
        else:
            out.append(form.residue_at(complex(comp)))
    return out


def conjugate(form: Form, garden: Garden) -> AntiMeromorphicForm:
    """Anti-meromorphic conjugate: the pair (form, result) has negating
    long and short period vectors.

    The auxiliary form gets residue targets conj(r_j) and long-period
    targets -conj(b_i); conjugating it pointwise then flips both, which is
    the unique choice cancelling every small-circle and loop period of the
    sum under the classical residue normalization.
    """
    residues = classical_residues(form, garden)
    total = sum(residues, 0j)
    if abs(total) > 1e-9:
        raise PairError(
            f"residue coefficients sum to {total:.3e}; no conjugate exists"
        )
    b = long_period_vector(form, garden)
    targets_long = [-v.conjugate() for v in b]
    divisor = CDivisor(
        garden.component_names,
        tuple(ExactComplex.from_complex(r.conjugate()) for r in residues),
    )
    psi = prescribe_full(targets_long, divisor, garden)
    return AntiMeromorphicForm(psi)


@dataclass(frozen=True)
class Pair:
    """(Phi, Phi-hat) with componentwise negating period vectors."""

    phi: Form
    phi_hat: AntiMeromorphicForm
    garden: Garden
    long_phi: Tuple[complex, ...]
    short_phi: Tuple[complex, ...]

    @staticmethod
    def build(form: Form, garden: Garden, tol: Optional[float] = None) -> "Pair":
        tol = period_tolerance() if tol is None else tol
        hat = conjugate(form, garden)
        pair = Pair.assemble(form, hat, garden)
        defects = pair.invariant_defects()
        if defects and max(defects) > tol:
            raise PairError(
                f"period negation fails by {max(defects):.3e} (tolerance {tol})"
            )
        return pair

    @staticmethod
    def assemble(form: Form, hat: AntiMeromorphicForm, garden: Garden) -> "Pair":
        longs, shorts = period_vectors(form, garden)
        return Pair(form, hat, garden, tuple(longs), tuple(shorts))

    def invariant_defects(self) -> List[float]:
        """|long(phi)+long(hat)| and |short(phi)+short(hat)| componentwise."""
        from .periods import short_period_vector

        longs_hat = [self.phi_hat.integrate(loop) for loop in self.garden.loop_basis]
        shorts_psi = short_period_vector(self.phi_hat.conjugate_of, self.garden)
        shorts_hat = [v.conjugate() for v in shorts_psi]
        out = [abs(a + b) for a, b in zip(self.long_phi, longs_hat)]
        out += [abs(a + b) for a, b in zip(self.short_phi, shorts_hat)]
        return out

    def integral(self, path: Path, tol: float = 1e-12) -> complex:
        return contour_integral(self.phi, path, tol) + self.phi_hat.integrate(path, tol)


def _same_garden(g1: Garden, g2: Garden) -> bool:
    if g1 is g2:
        return True
    if type(g1.model) is not type(g2.model):
        return False
    if isinstance(g1.model, TorusModel) and g1.model.torus.tau != g2.model.torus.tau:
        return False
    return (
        g1.component_names == g2.component_names
        and g1.basepoint == g2.basepoint
        and len(g1.loop_basis) == len(g2.loop_basis)
    )


def pairs_equivalent(pair1: Pair, pair2: Pair, tol: Optional[float] = None) -> bool:
    """Fields agree modulo meromorphic + anti-meromorphic functions iff the
    underlying forms share long and short period vectors."""
    if not _same_garden(pair1.garden, pair2.garden):
        raise PairError("pairs live on different gardens")
    tol = period_tolerance() if tol is None else tol
    longs = zip(pair1.long_phi, pair2.long_phi)
    shorts = zip(pair1.short_phi, pair2.short_phi)
    return all(abs(a - b) < tol for a, b in longs) and all(
        abs(a - b) < tol for a, b in shorts
    )


# -- field evaluation ------------------------------------------------------------


def evaluation_path(garden: Garden, z: complex, margin: Optional[float] = None) -> Path:
    """Deterministic basepoint-to-z path: straight segment with circular
    detours around any pole site closer than the detour margin."""
    sites = garden.pole_sites()
    if margin is None:
        margin = 0.05
        for i, p in enumerate(sites):
            for q in sites[i + 1:]:
                d = abs(p - q)
                if d > 1e-12:
                    margin = min(margin, 0.45 * d)
        margin = max(margin, garden.pole_margin)
    if any(abs(z - p) < margin for p in sites):
        raise GardenError(f"evaluation point {z} is within {margin} of a pole")
    return detoured_segment(garden.basepoint, z, sites, margin)


@dataclass(frozen=True)
class PluriharmonicField:
    """Single-valued integral of a pair from the garden basepoint."""

    pair: Pair
    closed_form: Optional[Tuple[Tuple[complex, complex], ...]] = None

    @property
    def garden(self) -> Garden:
        return self.pair.garden

    def value(self, z: complex, path: Optional[Path] = None) -> complex:
        """h(z), complex in general (real when the data is self-conjugate)."""
        if path is None:
            path = evaluation_path(self.garden, complex(z))
        else:
            if abs(path.start - self.garden.basepoint) > 1e-12:
                raise PairError("evaluation path must start at the garden basepoint")
            if abs(path.end - complex(z)) > 1e-12:
                raise PairError("evaluation path must end at the evaluation point")
        return self.pair.integral(path)

    def real_value(self, z: complex, path: Optional[Path] = None,
                   tol: Optional[float] = None) -> float:
        """h(z) checked to be real within tolerance; the mathematical field
        is real exactly when residues are real and long periods imaginary."""
        tol = period_tolerance() if tol is None else tol
        w = self.value(z, path)
        if abs(w.imag) > tol:
            raise PairError(
                f"imaginary residue {w.imag:.3e} exceeds {tol}; "
                "the pair is not self-conjugate"
            )
        return w.real

    def grid(self, window: Tuple[float, float, float, float], res: int) -> List[Tuple[float, float, float]]:
        """CSV-ready rows (x, y, h) over an res x res grid; pole-adjacent
        points are skipped."""
        x0, x1, y0, y1 = window
        rows = []
        for y in np.linspace(y0, y1, res):
            for x in np.linspace(x0, x1, res):
                z = complex(x, y)
                try:
                    rows.append((float(x), float(y), self.real_value(z)))
                except (GardenError, PairError):
                    continue
        return rows


def integrate_pair(pair: Pair, z: complex, path: Optional[Path] = None) -> float:
    """Path integral of the pair from basepoint to z, returned as a real
    value after checking the imaginary residue."""
    return PluriharmonicField(pair).real_value(z, path)


def build_field(form: Form, garden: Garden) -> PluriharmonicField:
    return PluriharmonicField(Pair.build(form, garden))


def log_field(garden: Garden, coefficients: Sequence[complex]) -> PluriharmonicField:
    """The sphere field sum r_i log|z - p_i|^2 (+const), built exactly.

    Requires real coefficients summing to zero; the closed form is stored
    so differentiation can read the coefficients back exactly.
    """
    if not isinstance(garden.model, SphereModel):
        raise PairError("closed-form log fields are a sphere construction")
    coeffs = [complex(c) for c in coefficients]
    if any(abs(c.imag) > 0 for c in coeffs):
        raise PairError("log fields need real coefficients")
    if abs(sum(c.real for c in coeffs)) > 1e-15:
        raise PairError("log-field coefficients must sum to zero")
    divisor = CDivisor(
        garden.component_names,
        tuple(ExactComplex.from_complex(c) for c in coeffs),
    )
    from .models import prescribe_residues

    phi = prescribe_residues(garden.model, divisor)
    pair = Pair.assemble(phi, AntiMeromorphicForm(phi), garden)
    closed = tuple(
        (comp.to_complex(), c)
        for comp, c in zip(garden.components, coeffs)
        if not (isinstance(comp, SpherePoint) and comp.is_infinity)
    )
    return PluriharmonicField(pair, closed_form=closed)


def differentiate_field(field: PluriharmonicField) -> Form:
    """The meromorphic form whose integral generated the field (the (1,0)
    part of dh); exact for stored structures."""
    return field.pair.phi


def field_from_form(form: Form, garden: Garden) -> PluriharmonicField:
    """Inverse of differentiation: conjugate the form and integrate."""
    return build_field(form, garden)


# -- audits -------------------------------------------------------------------


def _random_audit_loops(garden: Garden, n: int, seed: int) -> List[Path]:
    rng = random.Random(seed)
    sites = garden.pole_sites()
    if isinstance(garden.model, SphereModel):
        finite = garden.finite_component_values() or [0j]
        xs = [p.real for p in finite]
        ys = [p.imag for p in finite]
        box = (min(xs) - 1.5, max(xs) + 1.5, min(ys) - 1.5, max(ys) + 1.5)
    else:
        tau = garden.model.torus.tau
        box = (0.0, 1.0 + tau.real, 0.0, tau.imag)
    loops: List[Path] = []
    attempts = 0
    margin = max(garden.pole_margin, 0.04)
    while len(loops) < n and attempts < 100 * n:
        attempts += 1
        center = complex(rng.uniform(box[0], box[1]), rng.uniform(box[2], box[3]))
        radius = rng.uniform(0.05, 0.6)
        if all(abs(abs(center - p) - radius) > margin for p in sites):
            loop = circle(center, radius)
            loops.append(loop if rng.random() < 0.5 else loop.reversed())
    if len(loops) < n:
        raise GardenError("could not place the requested number of audit loops")
    return loops


def audit_loops(garden: Garden, n_random: int, seed: int = 0) -> List[Path]:
    """Garden basis + one small circle per component + random circles."""
    from .periods import _component_circle

    loops = list(garden.loop_basis)
    for j, comp in enumerate(garden.components):
        loop, at_infinity = _component_circle(garden, j)
        if not at_infinity:
            loops.append(loop)
    loops.extend(_random_audit_loops(garden, n_random, seed))
    return loops


def well_definedness_audit(pair: Pair, n_random_loops: int = 20, seed: int = 0) -> float:
    """Maximum |loop integral of the pair| over the audit loop family;
    single-valuedness means this stays below the period tolerance."""
    worst = 0.0
    for loop in audit_loops(pair.garden, n_random_loops, seed):
        worst = max(worst, abs(pair.integral(loop)))
    return worst


def laplacian_check(
    field: PluriharmonicField,
    samples: Sequence[complex],
    step: float,
) -> float:
    """Max |five-point Laplacian| of h over the samples (units of h / len^2).

    Each stencil difference h(s + d) - h(s) is one short segment integral
    of the pair, so the basepoint value cancels exactly.  Samples must
    keep distance > 10 * step from every pole.
    """
    sites = field.garden.pole_sites()
    worst = 0.0
    for s in samples:
        s = complex(s)
        if any(abs(s - p) <= 10 * step for p in sites):
            raise GardenError(f"sample {s} closer than 10 steps to a pole")
        acc = 0j
        for d in (step, -step, 1j * step, -1j * step):
            acc += field.pair.integral(Path([line(s, s + d)]))
        worst = max(worst, abs(acc) / (step * step))
    return worst


# -- dimension counts -----------------------------------------------------------


def spanning_forms(garden: Garden) -> List[Form]:
    """Canonical forms whose pairs span the pluriharmonic space mod T_G:
    simple-pole differences against the first component, plus (torus) the
    two second-kind generators."""
    comps = garden.components
    out: List[Form] = []
    for j in range(1, len(comps)):
        out.append(third_kind(garden.model, comps[0], comps[j]))
    if isinstance(garden.model, TorusModel):
        torus = garden.model.torus
        out.append(holomorphic_torus(torus, 1.0))
        if comps:
            out.append(second_kind_torus(torus, complex(comps[0]), 2))
    return out


def pluriharmonic_space_dim(garden: Garden) -> int:
    """k + b1: kernel dimension of the model Chern map plus the first Betti
    number (all points on either model share one nonzero class, so k is
    l - 1 for l >= 1)."""
    l = len(garden.components)
    k = l - 1 if l >= 1 else 0
    return k + garden.model.b1


# -- pair descriptor files --------------------------------------------------------


def format_pair_text(pair: Pair) -> str:
    """Pair descriptor: garden section, then the two underlying forms.

    The anti-meromorphic side is stored through its meromorphic underlier;
    periods are re-measured (and the invariants re-checked) at load time.
    """
    from .models import format_form_for_model
    from .periods import format_garden_text

    chunks = [
        "[garden]\n",
        format_garden_text(pair.garden),
        "[phi]\n",
        format_form_for_model(pair.phi, pair.garden.model),
        "[psi]\n",
        format_form_for_model(pair.phi_hat.conjugate_of, pair.garden.model),
    ]
    return "".join(chunks)


def parse_pair_text(text: str) -> Pair:
    from .models import parse_form_for_model
    from .periods import parse_garden_text

    sections = {}
    current = None
    for raw in text.splitlines():
        stripped = raw.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1]
            sections[current] = []
            continue
        if current is not None:
            sections[current].append(raw)
    for needed in ("garden", "phi", "psi"):
        if needed not in sections:
            raise PairError(f"pair file missing [{needed}] section")
    garden = parse_garden_text("\n".join(sections["garden"]))
    phi = parse_form_for_model("\n".join(sections["phi"]), garden.model)
    psi = parse_form_for_model("\n".join(sections["psi"]), garden.model)
    pair = Pair.assemble(phi, AntiMeromorphicForm(psi), garden)
    defects = pair.invariant_defects()
    if defects and max(defects) > period_tolerance():
        raise PairError(
            f"loaded pair violates period negation by {max(defects):.3e}"
        )
    return pair


SV_GAP = 1e-4


def period_matrix_rank(garden: Garden) -> Tuple[int, float]:
    """Independent check of the dimension count: numerical rank of the
    stacked (long, short) period rows of the canonical spanning pairs,
    with the singular-value gap certifying the threshold."""
    rows = []
    for form in spanning_forms(garden):
        longs, shorts = period_vectors(form, garden)
        rows.append([*longs, *shorts])
    if not rows or not rows[0]:
        return 0, math.inf
    sigma = np.linalg.svd(np.array(rows, dtype=complex), compute_uv=False)
    kept = [s for s in sigma if s > SV_GAP]
    discarded = [s for s in sigma if s <= SV_GAP]
    gap = (min(kept) if kept else math.inf) - (max(discarded) if discarded else 0.0)
    if gap <= SV_GAP:
        raise PairError(f"singular-value gap {gap:.3e} too small to certify rank")
    return len(kept), gap
