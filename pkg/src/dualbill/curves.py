"""Level-curve parametrizations, fiber lifts, covering branch points,
critical fiber decompositions and elliptic models.

Regular level curves of the a1, a2, b1, b2 and d integrals are rational and
carry explicit parametrizations; the c-family level curves are elliptic and
are handled implicitly (polynomial plus line slicing).  The double cover of
a level curve by its invariant fiber branches where the curve crosses the
parabola transversally; for the b and d families those branch parameters
feed a genus-one model y^2 = p(t) whose periods are computed by contour
quadrature.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .billiards import BilliardFamily
from .geometry import (
    E_INFINITY,
    PhasePoint,
    ProjectivePoint,
    b_family_equivalence,
    conic_point,
)
from .integrals import (
    BiPoly,
    coefficients_a1,
    coefficients_a2,
    first_integral,
    indeterminacy_set,
    critical_values,
)
from .numerics import (
    DEFAULT_TOL,
    INF,
    BranchedSqrt,
    SphereValue,
    Tolerance,
    chordal_distance,
    plan_route,
    principal_sqrt,
    roots as poly_roots,
    Polynomial,
    segment_integrate,
    sphere_eq,
)

__all__ = [
    "is_regular",
    "parametrize_level",
    "lift_fiber",
    "curve_parameter",
    "sheet_sqrt",
    "branch_points",
    "elliptic_poly",
    "EllipticModel",
    "elliptic_model",
    "lattice_closure_residual",
    "CurveComponent",
    "critical_fiber_components",
    "component_product_residual",
    "FiberComponent",
    "FiberModel",
    "fiber_type",
    "LevelCurveModel",
    "level_curve_model",
    "point_on_level",
    "tangency_gap",
]

_Z = BiPoly.var_z()
_W = BiPoly.var_w()
_ONE = BiPoly.const(1)


def is_regular(family: BilliardFamily, lam, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether lam avoids every critical value of the family's integral."""
    lam = SphereValue.coerce(lam)
    return not any(sphere_eq(lam, c, tol) for c in critical_values(family))


def _require_regular(family: BilliardFamily, lam) -> SphereValue:
    lam = SphereValue.coerce(lam)
    if lam.is_inf or not is_regular(family, lam):
        raise ValueError(
            f"{lam!r} is a critical value of family {family.label()}; "
            "no regular parametrization there"
        )
    return lam


def _a_products(cs: Sequence[complex], tau2: complex) -> complex:
    prod = 1.0 + 0j
    for c in cs:
        prod *= (1.0 - complex(c)) * tau2 - 1.0
    return prod


def _point_from_sphere_pair(z: SphereValue, w: SphereValue, ratio: SphereValue) -> ProjectivePoint:
    if not z.is_inf and not w.is_inf:
        return ProjectivePoint.affine(z.value, w.value)
    if z.is_inf and not w.is_inf:
        return ProjectivePoint(1.0, 0.0, 0.0)
    if w.is_inf and not z.is_inf:
        return E_INFINITY
    if ratio.is_inf:
        return E_INFINITY
    return ProjectivePoint(1.0, ratio.value, 0.0)


def _div(num: complex, den: complex) -> SphereValue:
    if den == 0:
        if num == 0:
            raise ZeroDivisionError("0/0 in a parametrization; value is critical")
        return INF
    return SphereValue(num / den)


def _param_a1(lam: complex, tau: SphereValue, cs) -> tuple[SphereValue, SphereValue, SphereValue]:
    if tau.is_inf:
        return INF, INF, INF  # approaches the infinite point of the parabola
    t = tau.value
    sq = principal_sqrt(lam)
    prod = _a_products(cs, t * t)
    z = 1j * sq * t * prod
    w = -lam * (t * t - 1.0) * prod * prod
    return SphereValue(z), SphereValue(w), INF


def _param_a2(lam: complex, s: SphereValue, cs) -> tuple[SphereValue, SphereValue, SphereValue]:
    if s.is_inf:
        return INF, INF, INF
    sv = s.value
    prod = 1.0 + 0j
    for c in cs:
        prod *= 1.0 + (complex(c) - 1.0) * sv
    z = -lam * sv * prod
    w = lam * lam * sv * (sv - 1.0) * prod * prod
    return SphereValue(z), SphereValue(w), INF


def _param_b1(lam: complex, t: SphereValue, _cs) -> tuple[SphereValue, SphereValue, SphereValue]:
    if t.is_inf:
        return SphereValue((lam - 1.0) / lam), INF, INF
    tv = t.value
    a = (1.0 - lam) * tv + lam
    z = _div(tv * a, lam * (tv - 1.0) * (4.0 - tv))
    w = _div(tv * tv * a * (3.0 * lam - tv), lam * lam * (tv - 1.0) * (4.0 - tv) ** 2)
    ratio = _div(tv * (3.0 * lam - tv), lam * (4.0 - tv)) if z.is_inf and w.is_inf else INF
    return z, w, ratio


def _param_d(lam: complex, t: SphereValue, _cs) -> tuple[SphereValue, SphereValue, SphereValue]:
    if t.is_inf:
        v = -lam / (8.0 * lam + 1.0)
        return SphereValue(v), SphereValue(v), INF
    tv = t.value
    q12 = lam * tv * tv + 12.0 * lam * tv - 9.0
    q4 = lam * tv * tv + 4.0 * lam * tv - 1.0
    lin = (8.0 * lam + 1.0) * tv - 5.0
    z = _div(-(lam * tv - 1.0) * q12, lam * tv * (3.0 + tv) * lin)
    w = _div(-q12 * q12 * q4, lam * lam * tv * tv * (3.0 + tv) ** 2 * lin * (tv + 4.0))
    if z.is_inf and w.is_inf:
        ratio = _div(q12 * q4, lam * tv * (3.0 + tv) * (tv + 4.0) * (lam * tv - 1.0))
    else:
        ratio = INF
    return z, w, ratio


_PARAM_FUNCS = {"a1": _param_a1, "a2": _param_a2, "b1": _param_b1, "d": _param_d}


def parametrize_level(
    family: BilliardFamily,
    lam,
    t,
    *,
    coefficients: Sequence[complex] | None = None,
) -> ProjectivePoint:
    """Point of the level curve {R = lam} at curve parameter t.

    Families a1/a2/b1/d use their rational parametrizations; b2 is the
    b-equivalence image of the b1 curve.  Parametrization poles return the
    projective limit point.  The optional ``coefficients`` override the
    a-family denominator coefficients (conservation is only guaranteed for
    the canonical ones).
    """
    lam = _require_regular(family, lam)
    lamv = lam.value
    t = SphereValue.coerce(t)
    tag = family.tag
    if tag in ("c1", "c2"):
        raise ValueError(
            "c-family level curves are elliptic and have no rational parametrization"
        )
    if tag == "b2":
        base = parametrize_level(BilliardFamily("b1"), lamv, t)
        return b_family_equivalence()(base)
    if family.is_a:
        cs = list(coefficients) if coefficients is not None else (
            coefficients_a1(family.n) if tag == "a1" else coefficients_a2(family.n)
        )
    else:
        cs = None
    z, w, ratio = _PARAM_FUNCS[tag](lamv, t, cs)
    return _point_from_sphere_pair(z, w, ratio)


def lift_fiber(family: BilliardFamily, lam, t, branch: str = "+") -> PhasePoint:
    """Phase point over the curve point at parameter t.

    For a1 the two signs select the two rational fiber components; for a2
    the fiber is connected and the sign is fixed by the parametrization; for
    b1/b2/d the sign selects the tangency sheet via the principal branch of
    sqrt(z^2 - w).
    """
    if branch not in ("+", "-"):
        raise ValueError("branch must be '+' or '-'")
    lam = _require_regular(family, lam)
    lamv = lam.value
    tv = SphereValue.coerce(t)
    tag = family.tag
    if tag == "a1":
        if tv.is_inf:
            raise ValueError("the a1 lift needs a finite parameter")
        tau = tv.value
        cs = coefficients_a1(family.n)
        sq = principal_sqrt(lamv)
        prod = _a_products(cs, tau * tau)
        sgn = 1.0 if branch == "+" else -1.0
        z0 = 1j * sq * (tau + sgn) * prod
        q = parametrize_level(family, lamv, tau)
        return PhasePoint(q, conic_point(z0))
    if tag == "a2":
        if tv.is_inf:
            raise ValueError("the a2 lift needs a finite parameter")
        tau = tv.value
        if tau == 0:
            raise ValueError("tau = 0 is a ramification point of the a2 fiber")
        q = parametrize_level(family, lamv, tau * tau)
        z, _ = q.affine_pair()
        z0 = (tau + 1.0) / tau * z
        return PhasePoint(q, conic_point(z0))
    if tag == "b2":
        base = lift_fiber(BilliardFamily("b1"), lamv, t, branch)
        psi = b_family_equivalence()
        return PhasePoint(psi(base.q), psi(base.p))
    q = parametrize_level(family, lamv, tv)
    if q.is_infinite:
        raise ValueError("cannot lift a point on the infinity line by the sheet rule")
    z, w = q.affine_pair()
    s = principal_sqrt(z * z - w)
    z0 = z + s if branch == "+" else z - s
    return PhasePoint(q, conic_point(z0))


def curve_parameter(family: BilliardFamily, x: PhasePoint) -> SphereValue:
    """Curve parameter of a phase point (rational inverse of the
    parametrization; for a-families the tangency point resolves the sign)."""
    tag = family.tag
    if tag == "b2":
        psi_inv = b_family_equivalence().inverse()
        return curve_parameter(BilliardFamily("b1"), PhasePoint(psi_inv(x.q), psi_inv(x.p)))
    if x.q.is_infinite:
        raise ValueError("curve parameter at an infinite point is not implemented")
    z, w = x.q.affine_pair()
    if tag == "b1":
        return _div(z * z - w, z * (z - 1.0))
    if tag == "d":
        g0 = (
            w + 8 * z * z + 4 * w * w + 5 * w * z * z - 14 * z * w - 4 * z**3
        )
        return _div(-g0, (w - z * z) * (w - z))
    # a-families: tau = z/(z0 - z) on the component where z0 = (tau+1)/tau * z
    z0s = x.p.z_sphere()
    if z0s.is_inf:
        raise ValueError("tangency at infinity has no finite fiber parameter")
    z0 = z0s.value
    if z0 == z:
        raise ValueError("degenerate pair: Q at the tangency point")
    return SphereValue(z / (z0 - z))


def _a1_branch_of(x: PhasePoint, lam: complex, n: int) -> str:
    """Which a1 fiber component a phase point lies on ('+' or '-')."""
    tau = curve_parameter(BilliardFamily("a1", n), x)
    probe = lift_fiber(BilliardFamily("a1", n), lam, tau.value, "+")
    return "+" if probe.p.eq(x.p) else "-"


# ---------------------------------------------------------------------------
# branch points and elliptic models

def _branch_quadratic(lam: complex) -> list[complex]:
    return poly_roots(Polynomial([4.0 * lam, -4.0 * lam, 1.0]))


def _branch_cubic_d(lam: complex) -> list[complex]:
    return poly_roots(
        Polynomial(
            [9.0, -36.0 * lam, 36.0 * lam * lam - 3.0 * lam, 9.0 * lam * lam + lam]
        )
    )


def branch_points(family: BilliardFamily, lam) -> list[SphereValue]:
    """Curve parameters where the fiber's double cover of the level curve
    branches (empty when the fiber splits into two sheets globally)."""
    lam = _require_regular(family, lam)
    lamv = lam.value
    tag = family.tag
    if tag == "a1" or tag in ("c1", "c2"):
        return []
    if tag == "a2":
        return [SphereValue(0.0), INF]
    if tag in ("b1", "b2"):
        out = [SphereValue(lamv / (lamv - 1.0)), INF]
        return out + [SphereValue(r) for r in _branch_quadratic(lamv)]
    return [SphereValue(-4.0)] + [SphereValue(r) for r in _branch_cubic_d(lamv)]


def elliptic_poly(family: BilliardFamily, lam) -> np.ndarray:
    """Descending coefficients of p(t) in the genus-one model y^2 = p(t)."""
    lam = _require_regular(family, lam)
    lamv = lam.value
    if family.tag in ("b1", "b2"):
        return np.polymul([1.0 - lamv, lamv], [1.0, -4.0 * lamv, 4.0 * lamv])
    if family.tag == "d":
        return np.polymul(
            [1.0, 4.0],
            [9.0 * lamv * lamv + lamv, 36.0 * lamv * lamv - 3.0 * lamv, -36.0 * lamv, 9.0],
        )
    raise ValueError(
        f"family {family.label()} has no square-root elliptic model in t"
    )


def _sorted_roots(br: BranchedSqrt) -> list[complex]:
    return sorted(br.roots, key=lambda r: (round(r.real, 12), round(r.imag, 12)))


def _min_gap(roots: Sequence[complex]) -> float:
    gaps = [
        abs(roots[i] - roots[j])
        for i in range(len(roots))
        for j in range(i + 1, len(roots))
    ]
    return min(gaps)


def _leg_clearance_score(br: BranchedSqrt, pts: Sequence[complex], skip: complex) -> float:
    worst = math.inf
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        for k in range(1, 24):
            t = a + (b - a) * k / 24.0
            for r in br.roots:
                if abs(r - skip) < 1e-12 and abs(t - skip) < 0.3 * abs(pts[0] - skip):
                    continue  # the desingularized approach to its own endpoint
                worst = min(worst, abs(t - r))
    return worst


def branched_leg_integral(
    br: BranchedSqrt,
    pts: Sequence[complex],
    anchor_value: complex,
    *,
    end_at_branch: complex | None = None,
    rel: float = 1e-10,
) -> complex:
    """Integral of dt/y along a polyline, y the branch of sqrt(p) that takes
    the value ``anchor_value`` at the first node.

    Cut-ray crossings flip a running sign so the integrand stays the
    continuous continuation; with ``end_at_branch`` the final approach is
    desingularized by the square-root substitution.
    """
    y0 = br.at(pts[0])
    sign = 1.0 if abs(y0 - anchor_value) <= abs(y0 + anchor_value) else -1.0
    total = 0j
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        boundaries = [0.0] + br.segment_crossings(a, b) + [1.0]
        d = b - a
        for j in range(len(boundaries) - 1):
            sa, sb = boundaries[j], boundaries[j + 1]
            ta, tb = a + d * sa, a + d * sb
            sgn = sign
            last_piece = i == len(pts) - 2 and j == len(boundaries) - 2
            if end_at_branch is not None and last_piece:
                t_amp = ta - tb

                def g(v, _s=sgn, _tb=tb, _amp=t_amp):
                    v = np.asarray(v)
                    return _s * 2.0 * v * _amp / br(_tb + _amp * v * v)

                total += -segment_integrate(g, 0.0, 1.0, rel=rel)
            else:

                def g(s, _s=sgn, _a=a, _d=d):
                    return _s * _d / br(_a + _d * np.asarray(s))

                total += segment_integrate(g, sa, sb, rel=rel)
            if j < len(boundaries) - 2:
                sign = -sign
    return total


@dataclass
class EllipticModel:
    """Genus-one data of one invariant fiber: y^2 = p(t)."""

    family: BilliardFamily
    lam: complex
    poly: np.ndarray  # descending coefficients of p
    branch_parameters: list[SphereValue]
    periods: tuple[complex, complex]
    _sqrt: BranchedSqrt = field(repr=False)

    def lattice_reduce(self, v: complex) -> complex:
        from .numerics import lattice_reduce

        return lattice_reduce(v, *self.periods)

    def sorted_roots(self) -> list[complex]:
        return _sorted_roots(self._sqrt)


def ramification_connection(
    br: BranchedSqrt, a: complex, b: complex, clearance: float
) -> complex:
    """Integral of dt/y from branch point a to branch point b.

    Both endpoint square-root singularities are desingularized; the
    connecting path goes through a waypoint chosen (by scored direction
    candidates) to keep clear of all other roots, which matters when the
    two branch points are a close or vertically aligned pair.  Since both
    endpoints are ramification points, any branch of y gives a valid path
    on the double cover.
    """
    best = None
    for theta_deg in (90, 60, 120, 30, 150, 75, 105, 45, 135):
        theta = math.radians(theta_deg)
        mid = (a + b) / 2.0 + 0.45 * abs(b - a) * cmath.exp(1j * theta)
        leg_a = plan_route([mid, a], br.roots, clearance)
        leg_b = plan_route([mid, b], br.roots, clearance)
        score = min(
            _leg_clearance_score(br, leg_a, a), _leg_clearance_score(br, leg_b, b)
        )
        cand = (score, mid, leg_a, leg_b)
        if best is None or cand[0] > best[0]:
            best = cand
        if best[0] > 0.5 * clearance:
            break
    _, mid, leg_a, leg_b = best
    ymid = br.at(mid)
    ia = branched_leg_integral(br, leg_a, ymid, end_at_branch=a)
    ib = branched_leg_integral(br, leg_b, ymid, end_at_branch=b)
    return ib - ia


def _pair_cycle_period(br: BranchedSqrt, a: complex, b: complex, clearance: float) -> complex:
    """Period of dt/y over a cycle enclosing the branch points a and b
    (twice the connecting integral)."""
    return 2.0 * ramification_connection(br, a, b, clearance)


def elliptic_model(family: BilliardFamily, lam) -> EllipticModel:
    """Branch polynomial, branch points and a period-lattice basis.

    Supported for the b and d families, whose fibers carry the square-root
    model; the c-family level curves are elliptic but have no rational
    parametrization, so their period data is out of reach of this model
    (their invariant differentials are still available in the forms module).
    """
    lam = _require_regular(family, lam)
    coeffs = elliptic_poly(family, lam)
    br = BranchedSqrt(coeffs)
    rts = _sorted_roots(br)
    clearance = 0.12 * _min_gap(rts)
    w1 = _pair_cycle_period(br, rts[0], rts[1], clearance)
    w2 = _pair_cycle_period(br, rts[1], rts[2], clearance)
    branch = [SphereValue(r) for r in rts]
    if len(coeffs) == 4:  # cubic model branches over infinity as well
        branch.append(INF)
    det = w1.real * w2.imag - w1.imag * w2.real
    if abs(det) <= 1e-12 * max(abs(w1), abs(w2)) ** 2:
        raise RuntimeError(
            "computed period generators are (near) real-proportional; "
            "no genuine lattice"
        )
    return EllipticModel(family, lam.value, coeffs, branch, (w1, w2), br)


def lattice_closure_residual(model: EllipticModel) -> float:
    """Distance from an independently integrated extra cycle to the lattice.

    The cycle encloses the first and third branch points; its period must be
    an integer combination of the two generators.
    """
    br = model._sqrt
    rts = model.sorted_roots()
    clearance = 0.12 * _min_gap(rts)
    extra = _pair_cycle_period(br, rts[0], rts[2], clearance)
    return abs(model.lattice_reduce(extra))


def sheet_sqrt(family: BilliardFamily, lam, x: PhasePoint) -> tuple[complex, complex]:
    """(t, y) coordinates of a phase point on the model y^2 = p(t).

    The tangency point P resolves the sheet: y is a rational multiple of
    z(P) - z(Q), so no branch tracking is involved.
    """
    lam = SphereValue.coerce(lam)
    lamv = lam.value
    tag = family.tag
    if tag == "b2":
        psi_inv = b_family_equivalence().inverse()
        return sheet_sqrt(
            BilliardFamily("b1"), lamv, PhasePoint(psi_inv(x.q), psi_inv(x.p))
        )
    t = curve_parameter(family, x).value
    z, _w = x.q.affine_pair()
    z0 = x.p.z_sphere().value
    if tag == "b1":
        h = t / (lamv * (t - 1.0) * (4.0 - t))
    elif tag == "d":
        h = (lamv * t * t + 12.0 * lamv * t - 9.0) / (
            lamv * t * (3.0 + t) * ((8.0 * lamv + 1.0) * t - 5.0) * (t + 4.0)
        )
    else:
        raise ValueError("sheet coordinates exist only for the b and d families")
    return t, (z0 - z) / h


# ---------------------------------------------------------------------------
# critical fibers

@dataclass(frozen=True)
class CurveComponent:
    """One irreducible component of a (typically critical) level curve."""

    name: str
    poly: BiPoly
    multiplicity: int = 1
    parametrize: Callable[[complex], ProjectivePoint] | None = None

    @property
    def degree(self) -> int:
        return self.poly.total_degree


def _pp(z: SphereValue, w: SphereValue, ratio: SphereValue) -> ProjectivePoint:
    return _point_from_sphere_pair(z, w, ratio)


def _line_param(a: complex, b: complex, c: complex):
    """Parametrization of the line a z + b w + c = 0 (affine + direction)."""

    def param(t: complex) -> ProjectivePoint:
        t = SphereValue.coerce(t)
        if t.is_inf:
            return ProjectivePoint(complex(b), complex(-a), 0.0)
        tv = t.value
        if b != 0:
            return ProjectivePoint.affine(tv, (-c - a * tv) / b)
        return ProjectivePoint.affine(-c / a, tv)

    return param


def _conic_param_through(poly: BiPoly, z0: complex, w0: complex):
    """Rational parametrization of a conic by lines w - w0 = m (z - z0)
    through one of its points (z0, w0)."""

    def param(m: complex) -> ProjectivePoint:
        m = SphereValue.coerce(m)
        # restrict the conic to the pencil line and divide out the known root
        if m.is_inf:
            direction = (0.0, 1.0)
        else:
            direction = (1.0, m.value)
        coeffs = poly.restrict_line((z0, w0), direction)
        # p(s) = s * (alpha + beta s); the other intersection is s = -alpha/beta
        alpha, beta = coeffs[1], coeffs[2]
        s = _div(-alpha, beta)
        if s.is_inf:
            return ProjectivePoint(direction[0], direction[1], 0.0)
        return ProjectivePoint.affine(z0 + s.value * direction[0], w0 + s.value * direction[1])

    return param


def _cubic_b1_level1_param(t: complex) -> ProjectivePoint:
    t = SphereValue.coerce(t)
    if t.is_inf:
        return ProjectivePoint.affine(0.0, -1.0)
    tv = t.value
    z = _div(tv, (tv - 1.0) * (4.0 - tv))
    w = _div(tv * tv * (3.0 - tv), (tv - 1.0) * (4.0 - tv) ** 2)
    ratio = _div(tv * (3.0 - tv), 4.0 - tv) if z.is_inf and w.is_inf else INF
    return _pp(z, w, ratio)


def _conic_b1_43_1_param(t: complex) -> ProjectivePoint:
    t = SphereValue.coerce(t)
    if t.is_inf:
        return E_INFINITY
    tv = t.value
    z = _div(tv, 4.0 * (tv - 1.0))
    w = _div(3.0 * tv * tv, 16.0 * (tv - 1.0))
    return _pp(z, w, INF if not (z.is_inf and w.is_inf) else SphereValue(3 * tv / 4))


def _conic_b1_43_2_param(tau: complex) -> ProjectivePoint:
    tau = SphereValue.coerce(tau)
    if tau.is_inf:
        return ProjectivePoint.affine(1.0 / 3.0, 1.0)
    tv = tau.value
    z = _div(tv - 9.0, 3.0 * tv)
    w = _div((tv - 9.0) * (tv + 3.0), tv * tv)
    return _pp(z, w, INF)


def _cubic_d_13_1_param(t: complex) -> ProjectivePoint:
    t = SphereValue.coerce(t)
    if t.is_inf:
        return ProjectivePoint.affine(-0.2, -5 * 0.04)  # z=-1/5, w=-5 z^2 * 1 = -0.2
    tv = t.value
    z = _div(-(tv + 9.0), 5.0 * tv)
    w = _div(-((tv + 9.0) ** 2) * (tv + 1.0), 5.0 * tv * tv * (tv + 4.0))
    if z.is_inf and w.is_inf:
        ratio = _div((tv + 9.0) * (tv + 1.0), tv * (tv + 4.0))
    else:
        ratio = INF
    return _pp(z, w, ratio)


def _cubic_d_13_2_param(tau: complex) -> ProjectivePoint:
    tau = SphereValue.coerce(tau)
    if tau.is_inf:
        return ProjectivePoint.affine(0.4, 1.6)
    tv = tau.value
    z = _div((tv + 9.0) * (2.0 * tv + 27.0), tv * (5.0 * tv + 72.0))
    w = _div((2.0 * tv + 27.0) ** 2 * (2.0 * tv - 9.0), tv * tv * (5.0 * tv + 72.0))
    if z.is_inf and w.is_inf:
        ratio = _div((2.0 * tv + 27.0) * (2.0 * tv - 9.0), tv * (tv + 9.0))
    else:
        ratio = INF
    return _pp(z, w, ratio)


def _quartic_d_932_param(t: complex) -> ProjectivePoint:
    t = SphereValue.coerce(t)
    if t.is_inf:
        return ProjectivePoint.affine(-9.0 / 40.0, -(81.0 / 1600.0) * 40.0 / 9.0)
    tv = t.value
    z = _div(-(9.0 * tv + 32.0) * (tv + 8.0), 40.0 * tv * (3.0 + tv))
    w = _div(
        -((tv + 8.0) ** 2) * (3.0 * tv + 8.0) * (3.0 * tv + 4.0),
        40.0 * tv * tv * (tv + 3.0) ** 2,
    )
    if z.is_inf and w.is_inf:
        ratio = _div((tv + 8.0) * (3.0 * tv + 8.0) * (3.0 * tv + 4.0), tv * (3.0 + tv) * (9.0 * tv + 32.0))
    else:
        ratio = INF
    return _pp(z, w, ratio)


def _d_generic_param(lam: complex):
    def param(t: complex) -> ProjectivePoint:
        z, w, ratio = _param_d(lam, SphereValue.coerce(t), None)
        return _pp(z, w, ratio)

    return param


# exact component polynomials -------------------------------------------------

_CONIC_GAMMA = _W - _Z * _Z
_CUBIC_B1_LEVEL1 = BiPoly.from_terms(
    (2, 3, 0), (-3, 2, 1), (-3, 2, 0), (6, 1, 1), (-1, 0, 2), (-1, 0, 1)
)
_CONIC_B1_43_1 = BiPoly.from_terms((4, 1, 1), (-1, 0, 1), (-3, 2, 0))  # w(4z-1) - 3z^2
_CONIC_B1_43_2 = BiPoly.from_terms((1, 0, 1), (-4, 1, 0), (3, 2, 0))  # w - z(4-3z)
_CUBIC_D_13_1 = BiPoly.from_terms((4, 1, 1), (-1, 0, 1), (5, 3, 0), (-8, 2, 0))
_CUBIC_D_13_2 = BiPoly.from_terms(
    (1, 0, 1), (8, 2, 0), (-7, 3, 0), (8, 2, 1), (1, 0, 2), (-11, 1, 1)
)
_QUARTIC_D_932 = BiPoly.from_terms(
    (40, 4, 0), (-108, 3, 0), (72, 2, 0), (37, 2, 1), (-54, 1, 1), (9, 0, 1), (4, 0, 2)
)
_CONIC_D_932 = BiPoly.from_terms((1, 0, 1), (8, 2, 0), (-9, 1, 1))  # w + 8z^2 - 9zw
_CONIC_D_C = BiPoly.from_terms((1, 0, 1), (8, 2, 0))  # w + 8z^2
_CUBIC_D_S = BiPoly.from_terms(
    (1, 0, 1), (8, 2, 0), (4, 0, 2), (5, 2, 1), (-14, 1, 1), (-4, 3, 0)
)
_LINE_Z1 = _Z - _ONE
_LINE_ZW = _Z - _W
_CONIC_B1_INF = _W + _Z * _Z * 3


def _c2_conics() -> list[BiPoly]:
    c1 = _CONIC_D_C  # w + 8z^2
    c2 = (_W - _Z).power(2).scale(9) + _W - _Z * _Z
    c3 = (_Z - _ONE).power(2).scale(9) + _W - _Z * _Z
    return [c1, c2, c3]


def _c1_conics() -> list[BiPoly]:
    e = cmath.exp(-2j * math.pi / 3)
    eb = e.conjugate()
    out = []
    for mu, nu in ((1.0, 1.0), (eb, e), (e, eb)):
        # 4 mu' z^2 + 3 (mu w^2 + 1) + 6 z (w + mu) + 5 mu' w with mu' = conj pattern
        out.append(
            BiPoly(
                {
                    (2, 0): 4 * nu,
                    (0, 2): 3 * mu,
                    (0, 0): 3,
                    (1, 1): 6,
                    (1, 0): 6 * mu,
                    (0, 1): 5 * nu,
                }
            )
        )
    return out


def critical_fiber_components(family: BilliardFamily, lam) -> list[CurveComponent]:
    """Irreducible components (with multiplicities) of a critical level curve.

    lam = 0 is reported as the parabola itself carrying the multiplicity of
    the integral's numerator.  Components the literature-level tables give a
    rational parametrization for carry one.
    """
    lam = SphereValue.coerce(lam)
    if is_regular(family, lam):
        raise ValueError(f"{lam!r} is a regular value of family {family.label()}")
    tag = family.tag
    integ = first_integral(family)
    if lam == SphereValue(0):
        return [
            CurveComponent("parabola", _CONIC_GAMMA, integ.zero_order, _gamma_param)
        ]
    if tag == "a1" and lam.is_inf:
        return [
            CurveComponent(f"parabola w = {c} z^2", _W - _Z * _Z * c, 2, None)
            for c in coefficients_a1(family.n)
        ]
    if tag == "a2" and lam.is_inf:
        comps = [CurveComponent("line z = 0", _Z, 1, _line_param(1.0, 0.0, 0.0))]
        comps += [
            CurveComponent(f"parabola w = {c} z^2", _W - _Z * _Z * c, 1, None)
            for c in coefficients_a2(family.n)
        ]
        return comps
    if tag == "b1":
        if lam.is_inf:
            return [
                CurveComponent("conic w + 3z^2", _CONIC_B1_INF, 1, None),
                CurveComponent("line z = 1", _LINE_Z1, 1, _line_param(1.0, 0.0, -1.0)),
                CurveComponent("line z = w", _LINE_ZW, 1, _line_param(1.0, -1.0, 0.0)),
            ]
        if lam == SphereValue(1):
            return [
                CurveComponent("line z = 0", _Z, 1, _line_param(1.0, 0.0, 0.0)),
                CurveComponent("cubic", _CUBIC_B1_LEVEL1, 1, _cubic_b1_level1_param),
            ]
        if lam == SphereValue(Fraction(4, 3)):
            return [
                CurveComponent("conic w = 3z^2/(4z-1)", _CONIC_B1_43_1, 1, _conic_b1_43_1_param),
                CurveComponent("conic w = z(4-3z)", _CONIC_B1_43_2, 1, _conic_b1_43_2_param),
            ]
    if tag == "b2":
        if lam.is_inf:
            return [
                CurveComponent(
                    "conic z^2+w^2+w+1", _Z * _Z + _W * _W + _W + _ONE, 1, None
                ),
                CurveComponent("line z = i", _Z - BiPoly.const(1j), 1, _line_param(1.0, 0.0, -1j)),
                CurveComponent("line z = -i", _Z + BiPoly.const(1j), 1, _line_param(1.0, 0.0, 1j)),
            ]
        if lam == SphereValue(1) or lam == SphereValue(Fraction(4, 3)):
            base = critical_fiber_components(BilliardFamily("b1"), lam)
            m_inv = b_family_equivalence().inverse().matrix
            out = []
            for comp in base:
                poly = _substitute_projective(comp.poly, m_inv)
                param = _compose_param(comp.parametrize)
                out.append(CurveComponent(comp.name + " (b-equivalence image)", poly, 1, param))
            return out
    if tag == "c1" and lam == SphereValue(Fraction(27, 64)):
        return [
            CurveComponent(f"conic #{k}", p, 1, None) for k, p in enumerate(_c1_conics())
        ]
    if tag == "c1" and lam.is_inf:
        return [CurveComponent("cubic 1 + w^3 - 2zw", _ONE + _W.power(3) - _Z * _W * 2, 2, None)]
    if tag == "c2" and lam == SphereValue(Fraction(-9, 64)):
        names = ["conic w + 8z^2", "conic 9(w-z)^2 + w - z^2", "conic 9(z-1)^2 + w - z^2"]
        polys = _c2_conics()
        params = [_conic_param_through(polys[0], 0.0, 0.0), None, None]
        return [
            CurveComponent(nm, p, 1, pr) for nm, p, pr in zip(names, polys, params)
        ]
    if tag == "c2" and lam.is_inf:
        return [CurveComponent("cubic", _cubic_c2_poly(), 2, None)]
    if tag == "d":
        if lam.is_inf:
            return [
                CurveComponent("conic w + 8z^2", _CONIC_D_C, 1, _conic_param_through(_CONIC_D_C, 0.0, 0.0)),
                CurveComponent("line z = 1", _LINE_Z1, 1, _line_param(1.0, 0.0, -1.0)),
                CurveComponent("cubic", _CUBIC_D_S, 1, None),
            ]
        if lam == SphereValue(Fraction(-1, 3)):
            return [
                CurveComponent("cubic w(4z-1) = -z^2(5z-8)", _CUBIC_D_13_1, 1, _cubic_d_13_1_param),
                CurveComponent("cubic", _CUBIC_D_13_2, 1, _cubic_d_13_2_param),
            ]
        if lam == SphereValue(Fraction(-9, 32)):
            return [
                CurveComponent("quartic", _QUARTIC_D_932, 1, _quartic_d_932_param),
                CurveComponent("conic w + 8z^2 - 9zw", _CONIC_D_932, 1, _conic_param_through(_CONIC_D_932, 0.0, 0.0)),
            ]
        if lam == SphereValue(Fraction(-1, 4)):
            poly = integ.level_polynomial(Fraction(-1, 4))
            return [
                CurveComponent(
                    "irreducible sextic (degenerate cusp at the origin)",
                    poly,
                    1,
                    _d_generic_param(-0.25),
                )
            ]
    raise ValueError(
        f"no component table for family {family.label()} at {lam!r}"
    )


def _cubic_c2_poly() -> BiPoly:
    return BiPoly.from_terms(
        (8, 3, 0), (-8, 2, 1), (-8, 2, 0), (-1, 0, 2), (-1, 0, 1), (10, 1, 1)
    )


def _gamma_param(t: complex) -> ProjectivePoint:
    return conic_point(SphereValue.coerce(t))


def _substitute_projective(poly: BiPoly, matrix: np.ndarray) -> BiPoly:
    """Image polynomial of {poly = 0} under the projective map: substitute
    the inverse map's linear forms into the homogenization."""
    d = poly.total_degree
    # trivariate linear forms for (z, w, t) after substitution
    rows = [tuple(complex(matrix[i, j]) for j in range(3)) for i in range(3)]

    def lin_pow(row, n):
        table = {(0, 0, 0): 1.0 + 0j}
        for _ in range(n):
            new = {}
            for (i, j, k), c in table.items():
                for idx, coef in enumerate(row):
                    if coef == 0:
                        continue
                    key = (i + (idx == 0), j + (idx == 1), k + (idx == 2))
                    new[key] = new.get(key, 0) + c * coef
            table = new
        return table

    out: dict[tuple[int, int], complex] = {}
    for (i, j), c in poly.coeffs.items():
        k = d - i - j
        term = {(0, 0, 0): complex(c)}
        for row, n in ((rows[0], i), (rows[1], j), (rows[2], k)):
            expanded = lin_pow(row, n)
            new = {}
            for (a1_, b1_, c1_), v1 in term.items():
                for (a2_, b2_, c2_), v2 in expanded.items():
                    key = (a1_ + a2_, b1_ + b2_, c1_ + c2_)
                    new[key] = new.get(key, 0) + v1 * v2
            term = new
        for (a_, b_, c_), v in term.items():
            out[(a_, b_)] = out.get((a_, b_), 0) + v  # set t = 1
    return BiPoly(out)


def _compose_param(base):
    if base is None:
        return None
    psi = b_family_equivalence()

    def param(t: complex) -> ProjectivePoint:
        return psi(base(t))

    return param


def component_product_residual(family: BilliardFamily, lam) -> float:
    """Relative coefficient residual of prod components^mult against the
    level polynomial (the denominator itself for lam = inf)."""
    lam = SphereValue.coerce(lam)
    comps = critical_fiber_components(family, lam)
    prod = BiPoly.const(1)
    for comp in comps:
        prod = prod * comp.poly.power(comp.multiplicity)
    integ = first_integral(family)
    if lam.is_inf:
        target = integ.den
    else:
        lamx = _as_fraction(lam.value)
        target = integ.level_polynomial(lamx if lamx is not None else lam.value)
    return prod.proportional_residual(target)


def _as_fraction(x: complex) -> Fraction | None:
    if x.imag != 0:
        return None
    return Fraction(x.real).limit_denominator(10**9)


# ---------------------------------------------------------------------------
# fiber and level-curve summaries

@dataclass(frozen=True)
class FiberComponent:
    genus: int
    covering: str  # "bijective" | "double"
    over: str
    branch_parameters: tuple[SphereValue, ...] = ()


@dataclass(frozen=True)
class FiberModel:
    family: BilliardFamily
    lam: SphereValue
    components: tuple[FiberComponent, ...]

    @property
    def component_count(self) -> int:
        return len(self.components)


def fiber_type(family: BilliardFamily, lam) -> FiberModel:
    """Component/genus/covering table of the invariant fiber over {R = lam}.

    Regular values follow the generic table; the tabulated critical cells
    are reproduced exactly.  Critical cells without a published table (the
    a-family multiple fibers at infinity) are not modeled.
    """
    lam = SphereValue.coerce(lam)
    tag = family.tag
    if is_regular(family, lam):
        if tag == "a1":
            comp = FiberComponent(0, "bijective", "level curve")
            return FiberModel(family, lam, (comp, comp))
        if tag == "a2":
            return FiberModel(
                family,
                lam,
                (
                    FiberComponent(
                        0,
                        "double",
                        "level curve",
                        (SphereValue(0.0), INF),
                    ),
                ),
            )
        if tag in ("c1", "c2"):
            comp = FiberComponent(1, "bijective", "level curve")
            return FiberModel(family, lam, (comp, comp))
        branch = tuple(branch_points(family, lam))
        return FiberModel(
            family, lam, (FiberComponent(1, "double", "level curve", branch),)
        )
    if lam == SphereValue(0):
        return FiberModel(
            family, lam, (FiberComponent(0, "bijective", "parabola (multiple)"),)
        )
    if tag == "b1" or tag == "b2":
        if lam == SphereValue(1):
            line = "line" if tag == "b1" else "conic (b-equivalence image of a line)"
            return FiberModel(
                family,
                lam,
                (
                    FiberComponent(0, "double", line),
                    FiberComponent(0, "bijective", "cubic"),
                    FiberComponent(0, "bijective", "cubic"),
                ),
            )
        if lam == SphereValue(Fraction(4, 3)):
            return FiberModel(
                family,
                lam,
                (
                    FiberComponent(0, "double", "conic #0"),
                    FiberComponent(0, "double", "conic #1"),
                ),
            )
    if tag in ("c1", "c2"):
        if lam.is_inf:
            return FiberModel(
                family,
                lam,
                (
                    FiberComponent(0, "bijective", "cubic"),
                    FiberComponent(0, "bijective", "cubic"),
                ),
            )
        comps = []
        for k in range(3):
            comps += [
                FiberComponent(0, "bijective", f"conic #{k}"),
                FiberComponent(0, "bijective", f"conic #{k}"),
            ]
        return FiberModel(family, lam, tuple(comps))
    if tag == "d":
        if lam.is_inf:
            return FiberModel(
                family,
                lam,
                (
                    FiberComponent(0, "bijective", "conic w + 8z^2"),
                    FiberComponent(0, "bijective", "conic w + 8z^2"),
                    FiberComponent(0, "double", "line z = 1"),
                    FiberComponent(0, "bijective", "cubic"),
                    FiberComponent(0, "bijective", "cubic"),
                ),
            )
        if lam == SphereValue(Fraction(-1, 3)):
            return FiberModel(
                family,
                lam,
                (
                    FiberComponent(0, "double", "cubic #0"),
                    FiberComponent(0, "double", "cubic #1"),
                ),
            )
        if lam == SphereValue(Fraction(-9, 32)):
            return FiberModel(
                family,
                lam,
                (
                    FiberComponent(0, "bijective", "quartic"),
                    FiberComponent(0, "bijective", "quartic"),
                    FiberComponent(0, "double", "conic"),
                ),
            )
        if lam == SphereValue(Fraction(-1, 4)):
            # the level curve is critical (degenerate cusp) but the fiber keeps
            # the generic elliptic double-cover structure
            return FiberModel(
                family,
                lam,
                (FiberComponent(1, "double", "level curve"),),
            )
    raise ValueError(f"no fiber table for family {family.label()} at {lam!r}")


@dataclass(frozen=True)
class LevelCurveModel:
    """Summary of one level curve: its kind and the handles it supports.

    Rational curves carry a parametrization, reducible ones their component
    list; the elliptic c-family curves have no rational parametrization and
    are carried by their implicit level polynomial alone (points come from
    line slicing).
    """

    family: BilliardFamily
    lam: SphereValue
    kind: str  # "rational-parametrized" | "elliptic" | "reducible"
    parametrize: Callable[[complex], ProjectivePoint] | None = None
    components: tuple[CurveComponent, ...] | None = None
    implicit: BiPoly | None = None


def level_curve_model(family: BilliardFamily, lam) -> LevelCurveModel:
    lam = SphereValue.coerce(lam)
    if not is_regular(family, lam):
        comps = tuple(critical_fiber_components(family, lam))
        return LevelCurveModel(family, lam, "reducible", None, comps)
    integ = first_integral(family)
    lamv = lam.value
    lamx = _as_fraction(lamv)
    implicit = integ.level_polynomial(lamx if lamx is not None else lamv)
    if family.tag in ("c1", "c2"):
        return LevelCurveModel(family, lam, "elliptic", None, None, implicit)

    def param(t: complex) -> ProjectivePoint:
        return parametrize_level(family, lamv, t)

    return LevelCurveModel(family, lam, "rational-parametrized", param, None, implicit)


def point_on_level(
    family: BilliardFamily,
    lam,
    rng: random.Random,
    *,
    attempts: int = 64,
) -> ProjectivePoint:
    """A point of {R = lam} found by slicing with random lines.

    Works for every family (the only route for the c-families, whose level
    curves have no rational parametrization).
    """
    lam = SphereValue.coerce(lam)
    if lam.is_inf:
        raise ValueError("slicing expects a finite level value")
    integ = first_integral(family)
    base = indeterminacy_set(family)
    for _ in range(attempts):
        p0 = (
            complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)),
            complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)),
        )
        dirv = cmath.exp(2j * math.pi * rng.random())
        direction = (dirv, complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)))
        coeffs_n = integ.num.restrict_line(p0, direction)
        coeffs_d = integ.den.restrict_line(p0, direction)
        size = max(len(coeffs_n), len(coeffs_d))
        coeffs = [0j] * size
        for i, c in enumerate(coeffs_n):
            coeffs[i] += c
        for i, c in enumerate(coeffs_d):
            coeffs[i] -= lam.value * c
        poly = Polynomial(coeffs)
        if poly.degree < 1:
            continue
        for s in poly_roots(poly):
            if abs(s) > 50:
                continue
            pt = ProjectivePoint.affine(p0[0] + s * direction[0], p0[1] + s * direction[1])
            if any(pt.eq(bp) for bp in base):
                continue
            try:
                val = integ.eval(pt)
            except Exception:
                continue
            if not val.is_inf and abs(val.value - lam.value) <= 1e-8 * max(1.0, abs(lam.value)):
                z, w = pt.affine_pair()
                if abs(z * z - w) > 1e-6:
                    return pt
    raise RuntimeError(
        f"could not slice a point on the {family.label()} level curve at {lam!r}"
    )


def tangency_gap(family: BilliardFamily, lam, t) -> float:
    """Chordal distance between the two tangency parameters of the curve
    point at parameter t (the quantity that collapses at branch points)."""
    q = parametrize_level(family, lam, t)
    if q.is_infinite:
        # on the infinity line the tangency pair is (E, c/2) for q = [1:c:0]
        if q.eq(E_INFINITY):
            return 0.0
        c = q.w / q.z
        return chordal_distance(INF, SphereValue(c / 2.0))
    z, w = q.affine_pair()
    s = principal_sqrt(z * z - w)
    return chordal_distance(SphereValue(z + s), SphereValue(z - s))
