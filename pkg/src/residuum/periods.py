"""Gardens, contour quadrature, and long/short period vectors.

A garden fixes everything period vectors depend on: the model geometry,
the ordered component list, a basis of loops avoiding the components, and
a basepoint.  Contour integrals run composite Gauss-Legendre panels with
panel doubling until two successive refinements agree to the quadrature
tolerance; short periods are cross-checked against exact residues, which
is what makes the rest of the numeric tower trustworthy.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .divisor import CDivisor
from .exact import ExactComplex
from .models import (
    Form,
    Model,
    ModelError,
    SphereModel,
    TorusModel,
    prescribe_residues,
)
from .sphere import SpherePoint, residue_at
from .torus import holomorphic_torus, second_kind_torus

QUAD_TOL = 1e-12
MAX_PANELS = 1024
GL_NODES = 16
HARD_POLE_MARGIN = 1e-3
RESIDUE_AGREE_TOL = 1e-9
TWO_PI_I = 2j * math.pi


def short_period_from_residue(residue: complex) -> complex:
    """The one conversion between classical residues and raw small-circle
    integrals: d_j = 2 pi i r_j.  Every other module goes through this."""
    return TWO_PI_I * complex(residue)


def period_tolerance() -> float:
    """Numerical-zero threshold for period vectors (RESIDUUM_TOL override)."""
    return float(os.environ.get("RESIDUUM_TOL", "1e-8"))


class PathError(ValueError):
    pass


class QuadratureError(RuntimeError):
    pass


class GardenError(ValueError):
    pass


class PrescriptionError(ValueError):
    pass


# -- paths -------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """One smooth parametrized piece: a line segment or a circular arc."""

    kind: str  # "line" | "arc"
    a: complex = 0j  # line: start;  arc: center
    b: complex = 0j  # line: end
    radius: float = 0.0
    angle0: float = 0.0
    angle1: float = 0.0

    def start(self) -> complex:
        if self.kind == "line":
            return self.a
        return self.a + self.radius * cmath.exp(1j * self.angle0)

    def end(self) -> complex:
        if self.kind == "line":
            return self.b
        return self.a + self.radius * cmath.exp(1j * self.angle1)

    def point(self, t: np.ndarray) -> np.ndarray:
        if self.kind == "line":
            return self.a + (self.b - self.a) * t
        ang = self.angle0 + (self.angle1 - self.angle0) * t
        return self.a + self.radius * np.exp(1j * ang)

    def velocity(self, t: np.ndarray) -> np.ndarray:
        if self.kind == "line":
            return np.full_like(t, self.b - self.a, dtype=complex)
        ang = self.angle0 + (self.angle1 - self.angle0) * t
        return self.radius * 1j * (self.angle1 - self.angle0) * np.exp(1j * ang)


def line(a: complex, b: complex) -> Piece:
    return Piece("line", complex(a), complex(b))


def arc(center: complex, radius: float, angle0: float, angle1: float) -> Piece:
    return Piece("arc", complex(center), 0j, float(radius), float(angle0), float(angle1))


class Path:
    """Piecewise smooth path; `offset` declares loop closure.

    offset None  -> open path,
    offset 0     -> planar loop (endpoint equals start),
    offset w     -> loop on a torus closing up to the lattice vector w.
    """

    def __init__(self, pieces: Sequence[Piece], offset: Optional[complex] = None):
        if not pieces:
            raise PathError("path needs at least one piece")
        self.pieces = tuple(pieces)
        for prev, nxt in zip(self.pieces, self.pieces[1:]):
            if abs(prev.end() - nxt.start()) > 1e-12:
                raise PathError("path pieces do not chain continuously")
        self.offset = None if offset is None else complex(offset)
        if self.offset is not None:
            gap = self.end - self.start - self.offset
            if abs(gap) > 1e-12:
                raise PathError(f"loop fails to close: endpoint gap {gap}")

    @property
    def start(self) -> complex:
        return self.pieces[0].start()

    @property
    def end(self) -> complex:
        return self.pieces[-1].end()

    @property
    def is_loop(self) -> bool:
        return self.offset is not None

    def reversed(self) -> "Path":
        rev = []
        for p in reversed(self.pieces):
            if p.kind == "line":
                rev.append(line(p.b, p.a))
            else:
                rev.append(arc(p.a, p.radius, p.angle1, p.angle0))
        off = None if self.offset is None else -self.offset
        return Path(rev, off)

    def sample_points(self, per_piece: int = 64) -> np.ndarray:
        t = np.linspace(0.0, 1.0, per_piece)
        return np.concatenate([p.point(t) for p in self.pieces])

    def min_distance(self, point: complex, per_piece: int = 256) -> float:
        """Distance from the path to a point (dense sampling; exact for lines)."""
        best = math.inf
        for p in self.pieces:
            if p.kind == "line":
                best = min(best, _segment_distance(p.a, p.b, point))
            else:
                t = np.linspace(0.0, 1.0, per_piece)
                best = min(best, float(np.min(np.abs(p.point(t) - point))))
        return best


def _segment_distance(a: complex, b: complex, p: complex) -> float:
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0:
        return abs(p - a)
    t = max(0.0, min(1.0, ((p - a) * ab.conjugate()).real / denom))
    return abs(a + t * ab - p)


def circle(center: complex, radius: float) -> Path:
    """Counterclockwise circle as a closed loop."""
    if radius <= 0:
        raise PathError("circle radius must be positive")
    return Path([arc(center, radius, 0.0, 2.0 * math.pi)], offset=0j)


def segment_loop(basepoint: complex, offset: complex) -> Path:
    """Straight loop generator on a torus: t -> basepoint + t*offset."""
    return Path([line(basepoint, basepoint + offset)], offset=offset)


def detoured_segment(a: complex, b: complex, poles: Sequence[complex], margin: float) -> Path:
    """Segment a -> b with counterclockwise circular detours of radius
    `margin` around any listed pole closer than `margin` to the segment.

    Deterministic; requires the endpoints themselves to clear every pole by
    the margin and detour disks not to overlap along the segment.
    """
    ab = b - a
    length = abs(ab)
    if length == 0:
        raise PathError("empty segment")
    hits = []
    for p in poles:
        if abs(p - a) < margin or abs(p - b) < margin:
            raise PathError(f"segment endpoint within margin of pole {p}")
        if _segment_distance(a, b, p) < margin:
            t_foot = ((p - a) * ab.conjugate()).real / (length * length)
            hits.append((t_foot, p))
    if not hits:
        return Path([line(a, b)])
    hits.sort()
    pieces: List[Piece] = []
    cursor = a
    prev_exit_t = 0.0
    for t_foot, p in hits:
        d = _segment_distance(a, b, p)
        half = math.sqrt(max(margin * margin - d * d, 0.0)) / length
        t1, t2 = t_foot - half, t_foot + half
        if t1 <= prev_exit_t:
            raise PathError("detour disks overlap along the segment")
        z1, z2 = a + t1 * ab, a + t2 * ab
        pieces.append(line(cursor, z1))
        ang1 = cmath.phase(z1 - p)
        ang2 = cmath.phase(z2 - p)
        while ang2 <= ang1:
            ang2 += 2.0 * math.pi
        pieces.append(arc(p, abs(z1 - p), ang1, ang2))
        # snap the arc landing back onto the segment to keep pieces chained
        cursor = z2
        # replace the analytic endpoint with the arc's numeric endpoint
        end_pt = pieces[-1].end()
        if abs(end_pt - z2) > 1e-12:
            pieces.append(line(end_pt, z2))
        prev_exit_t = t2
    pieces.append(line(cursor, b))
    return Path(pieces)


# -- quadrature ----------------------------------------------------------------


_GL_CACHE: dict = {}


def _gl_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    rule = _GL_CACHE.get(n)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(n)
        rule = ((x + 1.0) / 2.0, w / 2.0)  # on [0, 1]
        _GL_CACHE[n] = rule
    return rule


def _integrate_piece_fixed(func, piece: Piece, panels: int) -> Tuple[complex, float]:
    x, w = _gl_rule(GL_NODES)
    edges = np.linspace(0.0, 1.0, panels + 1)
    starts, widths = edges[:-1], np.diff(edges)
    t = (starts[:, None] + widths[:, None] * x[None, :]).ravel()
    weights = (widths[:, None] * w[None, :]).ravel()
    z = piece.point(t)
    terms = func(z) * piece.velocity(t) * weights
    return complex(np.sum(terms)), float(np.sum(np.abs(terms)))


ROUNDOFF_REL = 5e-14


def contour_integral(
    form_or_func: Union[Form, Callable],
    path: Path,
    tol: float = QUAD_TOL,
) -> complex:
    """Adaptive composite Gauss-Legendre integral of f(z) dz along the path.

    Panel count doubles until two refinements agree within `tol` plus the
    double-precision roundoff floor of the absolute-value integral; raises
    QuadratureError at the panel cap (a pole too close to the path).
    """
    func = form_or_func.eval_complex if hasattr(form_or_func, "eval_complex") else form_or_func
    total = 0j
    for piece in path.pieces:
        panels = 2
        prev, _ = _integrate_piece_fixed(func, piece, panels)
        while True:
            panels *= 2
            cur, rough = _integrate_piece_fixed(func, piece, panels)
            if abs(cur - prev) < tol + ROUNDOFF_REL * rough:
                total += cur
                break
            if panels >= MAX_PANELS:
                raise QuadratureError(
                    f"quadrature did not converge at {panels} panels "
                    f"(last delta {abs(cur - prev):.3e}); pole too close to path?"
                )
            prev = cur
    return total


def fixed_contour_integral(form_or_func, path: Path, nodes_per_piece: int = 64) -> complex:
    """Non-adaptive composite rule (nodes_per_piece = panels x 16 nodes)."""
    func = form_or_func.eval_complex if hasattr(form_or_func, "eval_complex") else form_or_func
    panels = max(1, nodes_per_piece // GL_NODES)
    return sum((_integrate_piece_fixed(func, p, panels)[0] for p in path.pieces), 0j)


# -- gardens --------------------------------------------------------------------


Point = Union[SpherePoint, complex]


@dataclass(frozen=True)
class Garden:
    """(model, ordered components, loop basis, basepoint)."""

    model: Model
    components: Tuple[Point, ...]
    loop_basis: Tuple[Path, ...]
    basepoint: complex
    pole_margin: float = HARD_POLE_MARGIN

    @property
    def component_names(self) -> Tuple[str, ...]:
        return tuple(self.model.point_name(p) for p in self.components)

    def divisor(self, coefficients: Sequence) -> CDivisor:
        return CDivisor(self.component_names, tuple(ExactComplex.coerce(a) for a in coefficients))

    def finite_component_values(self) -> List[complex]:
        out = []
        for p in self.components:
            if isinstance(p, SpherePoint):
                if not p.is_infinity:
                    out.append(p.to_complex())
            else:
                out.append(complex(p))
        return out

    def pole_sites(self) -> List[complex]:
        """Pole locations relevant for clearance checks (lattice translates
        within one cell on the torus)."""
        finite = self.finite_component_values()
        if isinstance(self.model, SphereModel):
            return finite
        tau = self.model.torus.tau
        sites = []
        for p in finite:
            for m in (-1, 0, 1):
                for n in (-1, 0, 1):
                    sites.append(p + m + n * tau)
        return sites


def _clearance_of_loops(loops: Sequence[Path], sites: Sequence[complex]) -> float:
    if not sites:
        return math.inf
    best = math.inf
    for loop in loops:
        for p in sites:
            best = min(best, loop.min_distance(p))
    return best


def make_garden(
    model: Model,
    components: Sequence,
    basepoint: Optional[complex] = None,
    loops: Optional[Sequence[Path]] = None,
) -> Garden:
    """Build a garden with deterministic auto-chosen basepoint and loops.

    Sphere: no loops (first Betti number 0); basepoint maximizes clearance
    to the finite components over a fixed grid.  Torus: the two straight
    generators through a basepoint chosen to maximize the loops' clearance
    to all pole translates.
    """
    if isinstance(model, SphereModel):
        comps = tuple(SpherePoint.coerce(p) for p in components)
        finite = [p.to_complex() for p in comps if not p.is_infinity]
        if basepoint is None:
            basepoint = _grid_argmax(
                lambda z: min((abs(z - p) for p in finite), default=math.inf),
                (-2.0, 2.0),
                (-2.0, 2.0),
                17,
            )
        loop_basis = tuple(loops) if loops else ()
        garden = Garden(model, comps, loop_basis, complex(basepoint))
    else:
        torus = model.torus
        comps = tuple(torus.reduce_point(complex(p))[0] for p in components)
        tau = torus.tau

        def loops_for(z0: complex) -> Tuple[Path, Path]:
            return (segment_loop(z0, 1.0 + 0j), segment_loop(z0, tau))

        sites_probe = Garden(model, comps, (), 0j).pole_sites()
        if basepoint is None:
            def score(st: complex) -> float:
                z0 = st.real + st.imag * tau
                return _clearance_of_loops(loops_for(z0), sites_probe)

            best = _grid_argmax(score, (0.02, 0.98), (0.02, 0.98), 13)
            basepoint = best.real + best.imag * tau
        loop_basis = tuple(loops) if loops else loops_for(complex(basepoint))
        garden = Garden(model, comps, loop_basis, complex(basepoint))

    sites = garden.pole_sites()
    clearance = _clearance_of_loops(garden.loop_basis, sites)
    if clearance < garden.pole_margin:
        raise GardenError(
            f"loop basis clears the components by only {clearance:.2e} "
            f"(margin {garden.pole_margin})"
        )
    if any(abs(garden.basepoint - p) < garden.pole_margin for p in sites):
        raise GardenError("basepoint sits within the pole margin of a component")
    if len(garden.loop_basis) != model.b1:
        raise GardenError(
            f"loop basis has {len(garden.loop_basis)} loops, first Betti number is {model.b1}"
        )
    return garden


def _grid_argmax(score, xr, yr, n) -> complex:
    best_val = -math.inf
    best = complex(xr[0], yr[0])
    for x in np.linspace(xr[0], xr[1], n):
        for y in np.linspace(yr[0], yr[1], n):
            v = score(complex(x, y))
            if v > best_val + 1e-15:
                best_val = v
                best = complex(x, y)
    return best


# -- period vectors ------------------------------------------------------------


def _check_form_in_garden(form: Form, garden: Garden) -> None:
    from .models import form_poles

    names = set(garden.component_names)
    for p, _ in form_poles(garden.model, form):
        if garden.model.point_name(p) not in names:
            # torus points may differ in float noise; fall back to distance
            if isinstance(garden.model, TorusModel):
                torus = garden.model.torus
                if any(
                    torus.translate_distance(complex(p), complex(q)) < 1e-9
                    for q in garden.components
                ):
                    continue
            raise GardenError(
                f"form has a pole at {garden.model.point_name(p)}, "
                "not among the garden components"
            )


def long_period_vector(form: Form, garden: Garden, tol: float = QUAD_TOL) -> List[complex]:
    """Integrals of the form over the garden's loop basis (empty on the sphere)."""
    _check_form_in_garden(form, garden)
    return [contour_integral(form, loop, tol) for loop in garden.loop_basis]


def small_circle_radius(garden: Garden, index: int) -> float:
    """Half the distance from a component to every other pole site (and, on
    the torus, to its own nearest lattice translate)."""
    comp = garden.components[index]
    if isinstance(garden.model, SphereModel):
        if comp.is_infinity:
            others = [1.0 / p for p in garden.finite_component_values() if p != 0]
            return min((abs(w) for w in others), default=1.0) / 2.0
        center = comp.to_complex()
        dists = [abs(center - p) for p in garden.finite_component_values() if abs(center - p) > 1e-15]
        return min(dists, default=2.0) / 2.0
    torus = garden.model.torus
    center = complex(comp)
    best = min(abs(m + n * torus.tau) for m in (-1, 0, 1) for n in (-1, 0, 1) if (m, n) != (0, 0))
    for q in garden.components:
        d = torus.translate_distance(center, complex(q))
        if d > 1e-15:
            best = min(best, d)
    return best / 2.0


def _component_circle(garden: Garden, index: int) -> Tuple[Path, bool]:
    """Small counterclockwise circle around a component; the flag marks the
    infinity component (whose circle lives in the w = 1/z chart)."""
    comp = garden.components[index]
    r = small_circle_radius(garden, index)
    if isinstance(garden.model, SphereModel) and comp.is_infinity:
        return circle(0j, r), True
    center = comp.to_complex() if isinstance(comp, SpherePoint) else complex(comp)
    return circle(center, r), False


def short_period_vector(
    form: Form, garden: Garden, tol: float = QUAD_TOL
) -> List[complex]:
    """d_j = integral over a small circle around each component.

    Computed by quadrature and cross-checked against 2 pi i times the exact
    residue; disagreement beyond 1e-9 raises QuadratureError.
    """
    _check_form_in_garden(form, garden)
    out: List[complex] = []
    for j, comp in enumerate(garden.components):
        loop, at_infinity = _component_circle(garden, j)
        if isinstance(garden.model, SphereModel):
            exact = residue_at(form, comp).to_complex()
            target = form.at_infinity_chart() if at_infinity else form
            quad = contour_integral(target, loop, tol)
        else:
            exact = form.residue_at(complex(comp))
            quad = contour_integral(form, loop, tol)
        expected = short_period_from_residue(exact)
        if abs(quad - expected) > RESIDUE_AGREE_TOL:
            raise QuadratureError(
                f"small-circle integral {quad} disagrees with 2 pi i x residue "
                f"{expected} at component {garden.model.point_name(comp)}"
            )
        out.append(expected if isinstance(garden.model, SphereModel) else quad)
    return out


def period_vectors(form: Form, garden: Garden, tol: float = QUAD_TOL) -> Tuple[List[complex], List[complex]]:
    return long_period_vector(form, garden, tol), short_period_vector(form, garden, tol)


def well_defined_residue_check(
    form: Form,
    garden: Garden,
    component_index: int,
    circle1: Path,
    circle2: Path,
    tol: float = RESIDUE_AGREE_TOL,
) -> bool:
    """Two admissible circles around one component give equal integrals.

    Each circle must enclose that pole and no other; violating the
    precondition raises GardenError.
    """
    comp = garden.components[component_index]
    center = comp.to_complex() if isinstance(comp, SpherePoint) else complex(comp)
    for c in (circle1, circle2):
        piece = c.pieces[0]
        if piece.kind != "arc":
            raise GardenError("residue-check paths must be circles")
        inside = []
        for p in garden.pole_sites():
            if abs(p - piece.a) < piece.radius - 1e-12:
                inside.append(p)
        if len(inside) != 1 or abs(inside[0] - center) > 1e-9:
            if isinstance(garden.model, TorusModel):
                ok = len(inside) == 1 and garden.model.torus.translate_distance(
                    inside[0], center
                ) < 1e-9
            else:
                ok = False
            if not ok:
                raise GardenError(
                    f"circle around {piece.a} encloses {len(inside)} pole site(s); "
                    "need exactly the checked component"
                )
    v1 = contour_integral(form, circle1)
    v2 = contour_integral(form, circle2)
    return abs(v1 - v2) < tol


def is_exact(form: Form, garden: Garden, tol: Optional[float] = None) -> bool:
    """True iff all long and short periods vanish numerically; on the sphere
    additionally verified against the symbolic criterion (all residues zero)."""
    tol = period_tolerance() if tol is None else tol
    longs, shorts = period_vectors(form, garden)
    numeric = all(abs(v) < tol for v in longs) and all(abs(v) < tol for v in shorts)
    if isinstance(garden.model, SphereModel):
        from .sphere import has_rational_antiderivative

        symbolic = has_rational_antiderivative(form)
        if symbolic != numeric:
            raise QuadratureError(
                "symbolic and numeric exactness criteria disagree "
                f"(symbolic={symbolic}, numeric={numeric})"
            )
    return numeric


def prescribe_full(
    target_long: Sequence[complex],
    target_residues: CDivisor,
    garden: Garden,
) -> Form:
    """Form with the given long period vector and residue divisor.

    Sphere: the long targets are vacuous (m = 0).  Torus: a zeta-combination
    carries the residues, then alpha dz + beta wp(z - p1) dz matches the two
    long periods; the system's determinant is the Legendre constant 2 pi i,
    so it never degenerates.
    """
    if len(target_long) != garden.model.b1:
        raise PrescriptionError(
            f"expected {garden.model.b1} long-period targets, got {len(target_long)}"
        )
    try:
        base = prescribe_residues(garden.model, target_residues)
    except (ValueError, ModelError) as e:
        raise PrescriptionError(str(e)) from None
    if isinstance(garden.model, SphereModel):
        return base
    torus = garden.model.torus
    u = long_period_vector(base, garden) if not base.is_zero() else [0j, 0j]
    rhs1 = complex(target_long[0]) - u[0]
    rhs2 = complex(target_long[1]) - u[1]
    if not garden.components:
        # no pole available: only multiples of dz remain
        alpha = rhs1
        if abs(rhs2 - alpha * torus.tau) > period_tolerance():
            raise PrescriptionError(
                "long-period target needs a second-kind pole, but the garden "
                "has no components to host one"
            )
        return base + holomorphic_torus(torus, alpha)
    eta1, eta2, tau = torus.eta1, torus.eta2, torus.tau
    det = -eta2 + tau * eta1  # Legendre: equals 2 pi i
    alpha = (rhs1 * (-eta2) - (-eta1) * rhs2) / det
    beta = (rhs2 - tau * rhs1) / det
    p1 = complex(garden.components[0])
    out = base + holomorphic_torus(torus, alpha)
    if beta != 0:
        out = out + second_kind_torus(torus, p1, 2).scale(beta)
    return out


# -- garden text format ---------------------------------------------------------


def parse_garden_text(text: str) -> Garden:
    """Garden file:

        model sphere | model torus
        tau = a + b i            (torus)
        cutoff = N               (torus, optional)
        component <point>        (one line per component, ordered)
        basepoint <complex>      (optional; auto-chosen when absent)
        loop circle <center> ; <radius>          (optional overrides)
        loop polyline <z0> ; <z1> ; ... ; <zn>

    Loops are auto-generated when no override is given; a polyline loop may
    close up to a lattice vector on the torus.
    """
    from .exact import parse_exact
    from .torus import Torus

    model_tag = None
    tau = None
    cutoff = 30
    components: List[str] = []
    basepoint = None
    loop_specs: List[Tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            if body.startswith("model"):
                model_tag = body.split(None, 1)[1].strip()
            elif body.startswith("tau"):
                tau = parse_exact(body.split("=", 1)[1]).to_complex()
            elif body.startswith("cutoff"):
                cutoff = int(body.split("=", 1)[1])
            elif body.startswith("component"):
                components.append(body.split(None, 1)[1].strip())
            elif body.startswith("basepoint"):
                basepoint = parse_exact(body.split(None, 1)[1]).to_complex()
            elif body.startswith("loop"):
                kind_rest = body.split(None, 2)
                loop_specs.append((kind_rest[1], kind_rest[2] if len(kind_rest) > 2 else ""))
            else:
                raise GardenError(f"line {lineno}: unknown directive {body!r}")
        except (IndexError, ValueError) as e:
            raise GardenError(f"line {lineno}: {e}") from None
    if model_tag == "sphere":
        model: Model = SphereModel()
    elif model_tag == "torus":
        if tau is None:
            raise GardenError("torus garden needs a `tau = a + b i` line")
        model = TorusModel(Torus(tau, cutoff))
    else:
        raise GardenError("garden file needs a `model sphere|torus` line")
    points = [model.parse_point(c) for c in components]
    loops = [_parse_loop_spec(kind, rest, model) for kind, rest in loop_specs] or None
    return make_garden(model, points, basepoint=basepoint, loops=loops)


def _parse_loop_spec(kind: str, rest: str, model: Model) -> Path:
    from .exact import parse_exact

    parts = [p.strip() for p in rest.split(";") if p.strip()]
    if kind == "circle":
        if len(parts) != 2:
            raise GardenError("loop circle needs `center ; radius`")
        return circle(parse_exact(parts[0]).to_complex(), float(parts[1]))
    if kind == "polyline":
        if len(parts) < 2:
            raise GardenError("loop polyline needs at least two points")
        pts = [parse_exact(p).to_complex() for p in parts]
        offset = pts[-1] - pts[0]
        if abs(offset) < 1e-12:
            offset = 0j
        elif isinstance(model, SphereModel):
            raise GardenError("sphere loops must close exactly")
        return Path([line(a, b) for a, b in zip(pts, pts[1:])], offset=offset)
    raise GardenError(f"unknown loop kind {kind!r}")


def format_garden_text(garden: Garden) -> str:
    lines = [f"model {garden.model.tag}"]
    if isinstance(garden.model, TorusModel):
        torus = garden.model.torus
        re, im = repr(torus.tau.real), repr(torus.tau.imag)
        lines.append(f"tau = {re} + {im} i")
        lines.append(f"cutoff = {torus.cutoff}")
    for name in garden.component_names:
        lines.append(f"component {name}")
    bp = garden.basepoint
    sign = "-" if bp.imag < 0 else "+"
    lines.append(f"basepoint {bp.real!r} {sign} {abs(bp.imag)!r} i")
    return "\n".join(lines) + "\n"


def normalize_pure_imaginary(form: Form, garden: Garden) -> Form:
    """Add mu dz so both long periods become purely imaginary (torus only;
    on the sphere there are no long periods and the form returns unchanged)."""
    if isinstance(garden.model, SphereModel):
        return form
    torus = garden.model.torus
    b = long_period_vector(form, garden)
    x = -b[0].real
    y = (b[1].real + x * torus.tau.real) / torus.tau.imag
    mu = complex(x, y)
    return form + holomorphic_torus(torus, mu)
