"""Complex arithmetic on the Riemann sphere, tolerances, root finding and
contour quadrature.

Everything downstream (geometry, dynamics, curve models, verification) is
built on the primitives in this module: values that may be the point at
infinity, a shared tolerance policy, polynomial root finding, finite
differences, and Gauss-Legendre contour integration with square-root
endpoint desingularization and global branch tracking.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "SpherePoleError",
    "principal_sqrt",
    "SphereValue",
    "INF",
    "Tolerance",
    "DEFAULT_TOL",
    "sphere_eq",
    "chordal_distance",
    "Polynomial",
    "roots",
    "finite_diff_jacobian",
    "contour_integrate",
    "segment_integrate",
    "BranchedSqrt",
    "plan_route",
    "lattice_reduce",
]


class SpherePoleError(ArithmeticError):
    """Raised for indeterminate sphere arithmetic (0*inf, inf-inf, 0/0, inf/inf)."""


class SphereValue:
    """A point of the Riemann sphere: a finite complex number or infinity.

    Arithmetic follows the usual Riemann-sphere conventions; the genuinely
    indeterminate combinations raise :class:`SpherePoleError` instead of
    producing a silent value.
    """

    __slots__ = ("_v",)

    def __init__(self, value: complex | None = None, *, infinite: bool = False):
        if infinite:
            self._v = None
        else:
            if value is None:
                raise ValueError("finite SphereValue needs a value")
            self._v = complex(value)

    @property
    def is_inf(self) -> bool:
        return self._v is None

    @property
    def value(self) -> complex:
        if self._v is None:
            raise SpherePoleError("infinite value has no finite part")
        return self._v

    @staticmethod
    def coerce(x: "SphereValue | complex | float | int") -> "SphereValue":
        if isinstance(x, SphereValue):
            return x
        x = complex(x)
        if cmath.isinf(x) or cmath.isnan(x):
            return INF
        return SphereValue(x)

    def reciprocal(self) -> "SphereValue":
        if self.is_inf:
            return SphereValue(0.0)
        if self._v == 0:
            return INF
        return SphereValue(1.0 / self._v)

    def __add__(self, other):
        other = SphereValue.coerce(other)
        if self.is_inf and other.is_inf:
            raise SpherePoleError("inf + inf is indeterminate on the sphere")
        if self.is_inf or other.is_inf:
            return INF
        return SphereValue(self._v + other._v)

    __radd__ = __add__

    def __neg__(self):
        return INF if self.is_inf else SphereValue(-self._v)

    def __sub__(self, other):
        other = SphereValue.coerce(other)
        if self.is_inf and other.is_inf:
            raise SpherePoleError("inf - inf is indeterminate")
        if self.is_inf or other.is_inf:
            return INF
        return SphereValue(self._v - other._v)

    def __rsub__(self, other):
        return SphereValue.coerce(other) - self

    def __mul__(self, other):
        other = SphereValue.coerce(other)
        if self.is_inf or other.is_inf:
            a = other if self.is_inf else self
            if not a.is_inf and a._v == 0:
                raise SpherePoleError("0 * inf is indeterminate")
            return INF
        return SphereValue(self._v * other._v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = SphereValue.coerce(other)
        if self.is_inf and other.is_inf:
            raise SpherePoleError("inf / inf is indeterminate")
        if other.is_inf:
            return SphereValue(0.0)
        if other._v == 0:
            if not self.is_inf and self._v == 0:
                raise SpherePoleError("0 / 0 is indeterminate")
            return INF
        if self.is_inf:
            return INF
        return SphereValue(self._v / other._v)

    def __rtruediv__(self, other):
        return SphereValue.coerce(other) / self

    def __eq__(self, other):
        try:
            other = SphereValue.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        if self.is_inf or other.is_inf:
            return self.is_inf and other.is_inf
        return self._v == other._v

    def __hash__(self):
        return hash(self._v)

    def __repr__(self):
        return "inf" if self.is_inf else repr(self._v)


INF = SphereValue(infinite=True)


@dataclass(frozen=True)
class Tolerance:
    """Shared comparison policy.

    abs_eps / rel_eps bound finite comparisons; values of modulus above
    inf_threshold are classified as infinite when compared against the
    point at infinity (coarse chordal-metric cutoff).
    """

    abs_eps: float = 1e-10
    rel_eps: float = 1e-9
    inf_threshold: float = 1e12

    def __post_init__(self):
        if not (self.abs_eps > 0 and self.rel_eps > 0 and self.inf_threshold > 0):
            raise ValueError("tolerance parameters must be strictly positive")

    def close(self, a: complex, b: complex) -> bool:
        return abs(a - b) <= max(self.abs_eps, self.rel_eps * max(abs(a), abs(b)))


DEFAULT_TOL = Tolerance()


def principal_sqrt(x: complex) -> complex:
    """Principal square root with signed zeros canonicalized to +0.

    Adding 0.0 flushes IEEE negative zeros so values that land exactly on
    the branch cut resolve to the upper side deterministically.
    """
    x = complex(x)
    return cmath.sqrt(complex(x.real + 0.0, x.imag + 0.0))


def chordal_distance(a: SphereValue | complex, b: SphereValue | complex) -> float:
    """Chordal metric on the Riemann sphere, d(a, inf) = 1/sqrt(1+|a|^2)."""
    a = SphereValue.coerce(a)
    b = SphereValue.coerce(b)
    if a.is_inf and b.is_inf:
        return 0.0
    if a.is_inf or b.is_inf:
        v = (b if a.is_inf else a).value
        return 1.0 / math.sqrt(1.0 + abs(v) ** 2)
    av, bv = a.value, b.value
    return abs(av - bv) / math.sqrt((1.0 + abs(av) ** 2) * (1.0 + abs(bv) ** 2))


def sphere_eq(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Tolerant equality on the sphere.

    Finite values compare with the abs/rel rule; values of modulus above
    ``tol.inf_threshold`` are classified as infinite, so e.g. 1e18 compares
    equal to infinity under the default threshold 1e12.
    """
    a = SphereValue.coerce(a)
    b = SphereValue.coerce(b)
    if not a.is_inf and not b.is_inf and tol.close(a.value, b.value):
        return True
    a_inf = a.is_inf or abs(a.value) >= tol.inf_threshold
    b_inf = b.is_inf or abs(b.value) >= tol.inf_threshold
    return a_inf and b_inf


class Polynomial:
    """Univariate polynomial with complex coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[complex]):
        cs = [complex(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        if self.is_zero:
            return -1
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __call__(self, t: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial([0.0])
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


def roots(p: Polynomial | Sequence[complex]) -> list[complex]:
    """All roots with multiplicity.

    Closed forms for degree 1 and 2; companion-matrix eigenvalues above,
    followed by one Newton polish step.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    if p.is_zero:
        raise ValueError("zero polynomial has no well-defined roots")
    deg = p.degree
    if deg < 1:
        raise ValueError("root finding needs degree >= 1")
    c = p.coeffs
    if deg == 1:
        return [-c[0] / c[1]]
    if deg == 2:
        a, b, cc = c[2], c[1], c[0]
        disc = cmath.sqrt(b * b - 4 * a * cc)
        # pick the sign that avoids cancellation in -b -/+ disc
        if (b.conjugate() * disc).real > 0:
            disc = -disc
        q = -(b - disc) / 2
        r1 = q / a
        r2 = cc / q if q != 0 else -b / a - r1
        return [r1, r2]
    rts = list(np.roots(list(reversed(c))))
    dp = p.derivative()
    polished = []
    for r in rts:
        r = complex(r)
        for _ in range(2):
            d = dp(r)
            if abs(d) == 0:
                break
            step = p(r) / d
            if abs(step) > 1e-2 * max(1.0, abs(r)):
                break
            r = r - step
        polished.append(r)
    return polished


def finite_diff_jacobian(
    f: Callable[[complex, complex], tuple[complex, complex]],
    at: tuple[complex, complex],
    step: float,
) -> complex:
    """Central-difference Jacobian determinant of a holomorphic 2-to-2 map."""
    z, w = at
    zp, zm = z + step, z - step
    wp, wm = w + step, w - step
    fz_p = f(zp, w)
    fz_m = f(zm, w)
    fw_p = f(z, wp)
    fw_m = f(z, wm)
    # divide by the realized stencil widths so affine maps come out exact
    dz, dw = zp - zm, wp - wm
    a11 = (fz_p[0] - fz_m[0]) / dz
    a21 = (fz_p[1] - fz_m[1]) / dz
    a12 = (fw_p[0] - fw_m[0]) / dw
    a22 = (fw_p[1] - fw_m[1]) / dw
    return a11 * a22 - a12 * a21


# ---------------------------------------------------------------------------
# quadrature

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def _panel(f, a: complex, b: complex) -> complex:
    mid = (a + b) / 2.0
    half = (b - a) / 2.0
    ts = mid + half * _GL_NODES
    vals = np.asarray(f(ts), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand blew up inside a quadrature panel")
    return complex(half * np.sum(_GL_WEIGHTS * vals))


def _refine(f, a: complex, b: complex, rel: float, max_splits: int = 12) -> complex:
    prev = None
    prev_abs = None
    incs: list[float] = []
    n = 1
    for _ in range(max_splits):
        nodes = [a + (b - a) * k / n for k in range(n + 1)]
        panels = [_panel(f, nodes[k], nodes[k + 1]) for k in range(n)]
        total = sum(panels)
        total_abs = sum(abs(p) for p in panels)
        inc = abs(total_abs - prev_abs) if prev_abs is not None else None
        if prev is not None and abs(total - prev) <= rel * max(1.0, abs(total)):
            # guard against a principal-value pole on the path: the value
            # series can cancel to convergence while the magnitude series
            # keeps growing by a constant per refinement, so accept only a
            # settled or twice-decaying magnitude series
            settled = inc <= 1e3 * rel * max(1.0, total_abs)
            decaying = (
                len(incs) >= 2
                and inc <= 0.6 * incs[-1]
                and incs[-1] <= 0.6 * incs[-2]
            )
            if settled or decaying:
                return total
        if inc is not None:
            incs.append(inc)
        prev = total
        prev_abs = total_abs
        n *= 2
    raise ValueError(
        "quadrature did not converge; a singularity may sit on the path"
    )


def segment_integrate(
    f,
    a: complex,
    b: complex,
    *,
    sqrt_singularity_at_b: bool = False,
    rel: float = 1e-10,
) -> complex:
    """Integral of f(t) dt over the straight segment [a, b].

    With ``sqrt_singularity_at_b`` the substitution t = b + (a-b) v^2 removes
    a declared square-root singularity at the endpoint b before quadrature.
    """
    if not sqrt_singularity_at_b:
        d = b - a
        return _refine(lambda s: f(a + d * s) * d, 0.0, 1.0, rel)
    A = a - b

    def g(v):
        v = np.asarray(v)
        return f(b + A * v * v) * 2.0 * v * A

    # v runs 1 -> 0 along the segment a -> b
    return -_refine(g, 0.0, 1.0, rel)


def contour_integrate(f, path: Sequence[complex], *, rel: float = 1e-10) -> complex:
    """Composite Gauss-Legendre quadrature of f(t) dt along a polyline.

    64 nodes per panel with dyadic panel refinement until two successive
    refinements agree to ``rel``. f must accept an ndarray of points and be
    finite along the path; declared endpoint singularities are handled by
    :func:`segment_integrate`.
    """
    pts = [complex(p) for p in path]
    if len(pts) < 2:
        raise ValueError("path needs at least two nodes")
    total = 0j
    for k in range(len(pts) - 1):
        total += segment_integrate(f, pts[k], pts[k + 1], rel=rel)
    return total


# ---------------------------------------------------------------------------
# global square-root branches and path planning

class BranchedSqrt:
    """A global branch of sqrt(p(t)) cut below each root of p.

    The branch is the product of per-root square roots, each cut along the
    downward vertical ray from its root, times the square root of the leading
    coefficient.  It is continuous on the plane minus those rays and can be
    evaluated at arbitrary points in any order, which makes it suitable for
    quadrature.  Crossings of the cut rays by a straight segment are exactly
    enumerable via :meth:`segment_crossings`, so a piecewise sign factor
    restores continuity along any polyline.
    """

    def __init__(self, coeffs: Sequence[complex]):
        self.coeffs = np.asarray([complex(c) for c in coeffs], dtype=complex)
        if len(self.coeffs) < 2:
            raise ValueError("need a non-constant polynomial")
        self.roots = [complex(r) for r in np.roots(self.coeffs)]
        self._lead = cmath.sqrt(complex(self.coeffs[0]))
        self._phase = cmath.exp(1j * math.pi / 4 * len(self.roots))

    def __call__(self, t):
        t = np.asarray(t, dtype=complex)
        vals = np.full(t.shape, self._lead * self._phase, dtype=complex)
        for r in self.roots:
            vals = vals * np.sqrt(-1j * (t - r))
        return vals

    def at(self, t: complex) -> complex:
        return complex(self(np.asarray([t]))[0])

    def segment_crossings(self, a: complex, b: complex) -> list[float]:
        """Parameters s in (0,1) where [a,b] crosses a cut ray."""
        out = []
        d = b - a
        if d.real == 0:
            return out
        for r in self.roots:
            s = (r.real - a.real) / d.real
            if 0.0 < s < 1.0 and a.imag + s * d.imag < r.imag:
                out.append(s)
        return sorted(out)


def plan_route(
    path: Sequence[complex],
    obstacles: Sequence[complex],
    clearance: float,
    *,
    max_depth: int = 8,
) -> list[complex]:
    """Bend a polyline so no segment passes within ``clearance`` of an obstacle.

    Detours always go above the obstacle (cuts in :class:`BranchedSqrt`
    point downward).  Segment endpoints themselves are allowed to coincide
    with obstacles: only interior near-approaches trigger a detour.
    """
    pts = [complex(p) for p in path]
    out = [pts[0]]
    for i in range(len(pts) - 1):
        seg = [pts[i], pts[i + 1]]
        for _ in range(max_depth):
            changed = False
            refined = [seg[0]]
            for k in range(len(seg) - 1):
                p, q = seg[k], seg[k + 1]
                d = q - p
                L = abs(d)
                if L > 0:
                    for r in obstacles:
                        s = ((r - p) / d).real if L else 0.0
                        if 0.02 < s < 0.98:
                            foot = p + s * d
                            if (
                                abs(foot - r) < clearance
                                and abs(r - p) > 1e-13
                                and abs(r - q) > 1e-13
                            ):
                                refined.append(r + 1.5j * clearance)
                                changed = True
                                break
                refined.append(q)
            seg = refined
            if not changed:
                break
        out.extend(seg[1:])
    return out


def lattice_reduce(v: complex, w1: complex, w2: complex) -> complex:
    """Reduce v modulo the lattice Z*w1 + Z*w2 (residual of nearest point)."""
    m = np.array([[w1.real, w2.real], [w1.imag, w2.imag]], dtype=float)
    try:
        x = np.linalg.solve(m, np.array([v.real, v.imag]))
    except np.linalg.LinAlgError as exc:
        raise ValueError("lattice generators are degenerate") from exc
    n0, n1 = np.round(x)
    return v - (n0 * w1 + n1 * w2)
