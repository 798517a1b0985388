"""Seeded, deterministic property checks packaging every invariant of the
library into named reports.

Every check draws its own RNG stream from (suite seed, check name), so the
full suite gives byte-identical reports for a fixed seed regardless of
execution order.  Each check also has a corruption hook used by the
harness's negative tests: with ``corrupt=True`` it must fail.
"""

from __future__ import annotations

import cmath
import hashlib
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .billiards import (
    BilliardFamily,
    PhasePoint,
    billiard_map,
    involution,
    orbit,
)
from .curves import (
    critical_fiber_components,
    curve_parameter,
    elliptic_model,
    lift_fiber,
    point_on_level,
)
from .forms import abel_steps, area_pullback_residual, chart_jacobian, halfstep_jacobian
from .geometry import (
    E_INFINITY,
    ProjectivePoint,
    b_family_equivalence,
    c_family_equivalence,
    conic_point,
)
from .integrals import (
    critical_values,
    critical_indeterminacies,
    eval_integral,
    first_integral,
    gradient_projective,
    hessian_projective,
    indeterminacy_set,
    true_critical_points,
)
from .numerics import DEFAULT_TOL, INF, SphereValue, Tolerance, principal_sqrt

__all__ = [
    "CheckReport",
    "CheckSuite",
    "default_suite",
    "run_suite",
    "sample_phase_point",
    "check_involution",
    "check_conservation",
    "check_translation",
    "check_abel_translation",
    "check_area_form",
    "check_jacobian",
    "check_tables",
    "check_equivalences",
    "CONSERVATION_CASES",
    "TRANSLATION_CASES",
    "ABEL_CASES",
]


@dataclass
class CheckReport:
    name: str
    family: str | None
    params: dict
    status: str  # "pass" | "fail" | "skipped"
    worst: float
    witness: dict | None = None

    def __post_init__(self):
        if self.status == "fail" and self.witness is None:
            raise ValueError("failing reports must carry a witness")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "family": self.family,
            "params": self.params,
            "status": self.status,
            "worst": self.worst,
            "witness": self.witness,
        }


def _rng_for(seed: int, name: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def sample_phase_point(
    family: BilliardFamily,
    rng: random.Random,
    *,
    conditioned: bool = True,
    guard: float = 0.2,
) -> PhasePoint:
    """Random phase point: tangency parameter uniform on the annulus
    0.1 <= |z0| <= 3 minus guard disks, offset uniform on 0.05 <= |u| <= 2.

    With ``conditioned`` the involution image must stay at a moderate
    distance from the tangency point, which keeps finite differences and
    form evaluations well scaled.
    """
    while True:
        r = math.sqrt(rng.uniform(0.1**2, 3.0**2))
        z0 = r * cmath.exp(2j * math.pi * rng.random())
        if any(
            (not s.is_inf) and abs(z0 - s.value) < guard
            for s in family.singular_tangency_parameters()
        ):
            continue
        ur = math.sqrt(rng.uniform(0.05**2, 2.0**2))
        u = ur * cmath.exp(2j * math.pi * rng.random())
        z = z0 + u
        x = PhasePoint(
            ProjectivePoint.affine(z, 2 * z0 * z - z0 * z0), conic_point(z0)
        )
        if not conditioned:
            return x
        try:
            q_img = involution(family, x.p, x.q)
        except Exception:
            continue
        z_img = q_img.z_sphere()
        if z_img.is_inf:
            continue
        if 0.05 <= abs(z_img.value - z0) <= 25.0:
            return x


def check_involution(
    family: BilliardFamily,
    samples: int = 1000,
    seed: int = 0,
    *,
    corrupt: bool = False,
) -> CheckReport:
    """sigma_P o sigma_P = id and sigma_P(P) = P on random samples."""
    rng = _rng_for(seed, f"involution:{family.label()}")
    worst = 0.0
    witness = None
    for k in range(samples):
        x = sample_phase_point(family, rng, conditioned=False)
        try:
            once = involution(family, x.p, x.q)
            twice = involution(family, x.p, once)
        except Exception:
            continue
        z_in = x.q.z_sphere()
        z_back = twice.z_sphere()
        if z_in.is_inf or z_back.is_inf:
            res = 0.0 if z_in.is_inf and z_back.is_inf else math.inf
        else:
            back = z_back.value + (1e-3 if corrupt else 0.0)
            res = abs(back - z_in.value) / max(1.0, abs(z_in.value))
        fixed = involution(family, x.p, x.p)
        z0 = x.p.z_sphere().value
        res = max(res, abs(fixed.z_sphere().value - z0) / max(1.0, abs(z0)))
        if res > worst:
            worst = res
            witness = {"sample": k, "z0": repr(z0), "z1": repr(z_in)}
    status = "pass" if worst <= 1e-9 else "fail"
    return CheckReport(
        f"involution:{family.label()}",
        family.label(),
        {"samples": samples, "seed": seed},
        status,
        worst,
        witness if status == "fail" else None,
    )


#: frozen (lambda, start parameter, branch) conservation cases per family
CONSERVATION_CASES: dict[str, list[tuple[complex, complex | None, str]]] = {
    "a1": [(1.0, 1.7, "+"), (2.0, 1.7, "+"), (0.5 + 1.0j, 1.3, "+")],
    "a2": [(1.0, 1.7, "+"), (2.0, 1.7, "+"), (0.5 + 1.0j, 1.3, "+")],
    "b1": [(2.0, 2.7, "+"), (3.0, 2.7, "+"), (0.5 + 0.5j, 2.7, "+")],
    "b2": [(2.0, 0.3, "+"), (2.5, 2.7, "+"), (0.5 + 0.5j, 2.7, "+")],
    "c1": [(1.0, None, "+"), (2.0, None, "+"), (0.3 + 0.4j, None, "+")],
    "c2": [(1.0, None, "+"), (2.0, None, "+"), (0.3 + 0.4j, None, "+")],
    "d": [(1.0, 1.3, "+"), (3.0, 1.3, "+"), (0.5 + 0.3j, 1.3, "+")],
}


def _start_point(
    family: BilliardFamily, lam: complex, t0: complex | None, branch: str, rng: random.Random
) -> PhasePoint:
    if t0 is not None:
        return lift_fiber(family, lam, t0, branch)
    q = point_on_level(family, lam, rng)
    z, w = q.affine_pair()
    s = principal_sqrt(z * z - w)
    return PhasePoint(q, conic_point(z + s if branch == "+" else z - s))


def check_conservation(
    family: BilliardFamily,
    lam: complex,
    steps: int = 500,
    seed: int = 0,
    *,
    start: complex | None = None,
    branch: str = "+",
    corrupt: bool = False,
    threshold: float = 1e-7,
    tol: Tolerance = DEFAULT_TOL,
) -> CheckReport:
    """The integral is constant along orbits: max |R(Q_k) - lam| rel."""
    from .curves import is_regular

    if not is_regular(family, lam):
        raise ValueError(
            f"conservation checks need a regular level value, got {lam!r}"
        )
    name = f"conservation:{family.label()}:lam={lam}"
    rng = _rng_for(seed, name)
    if start is None:
        for cl, ct, cb in CONSERVATION_CASES[family.tag]:
            if cl == lam:
                start, branch = ct, cb
                break
    x0 = _start_point(family, lam, start, branch, rng)
    rec = orbit(family, x0, steps, tol)
    target = lam * (1 + 1e-3) if corrupt else lam
    worst = 0.0
    witness = None
    for k, x in enumerate(rec.points):
        try:
            val = eval_integral(family, x.q)
        except Exception:
            continue
        if val.is_inf:
            continue
        res = abs(val.value - target) / max(1.0, abs(target))
        if res > worst:
            worst = res
            witness = {"step": k, "q": repr(x.q)}
    params = {"lam": repr(lam), "steps": steps, "seed": seed}
    if rec.reason != "completed":
        return CheckReport(
            name, family.label(), params, "skipped", worst,
            {"reason": rec.reason, "detail": rec.detail, "steps_taken": rec.steps_taken},
        )
    status = "pass" if worst <= threshold else "fail"
    return CheckReport(
        name, family.label(), params, status, worst,
        witness if status == "fail" else None,
    )


#: frozen translation-dynamics cases: (family tag, N, lambda, start tau)
TRANSLATION_CASES: list[tuple[str, int, complex, complex]] = [
    ("a1", 1, 1.0, 1.7),
    ("a1", 2, 3.0, 1.7),
    ("a1", 3, 1.0, 1.7),
    ("a2", 1, 1.0, 1.7),
    ("a2", 2, 1.0, 1.7),
    ("a2", 3, 2.0, 1.7),
]


def check_translation(
    family: BilliardFamily,
    lam: complex,
    steps: int = 50,
    seed: int = 0,
    *,
    start: complex = 1.7,
    branch: str = "+",
    corrupt: bool = False,
) -> CheckReport:
    """a-family orbits are arithmetic progressions in the fiber parameter.

    The parameter is recovered from each phase point through the tangency
    point (which fixes the square-root branch of z/sqrt(z^2 - w)); the
    common difference must match 2/(2N+1) resp. 1/(N+1) to 1e-9.
    """
    if not family.is_a:
        raise ValueError("translation dynamics applies to the a-families")
    name = f"translation:{family.label()}:lam={lam}"
    x0 = lift_fiber(family, lam, start, branch)
    rec = orbit(family, x0, steps)
    params = {"lam": repr(lam), "steps": steps, "seed": seed, "start": repr(start)}
    if rec.reason != "completed":
        return CheckReport(
            name, family.label(), params, "skipped", 0.0,
            {"reason": rec.reason, "steps_taken": rec.steps_taken},
        )
    taus = [curve_parameter(family, x).value for x in rec.points]
    diffs = [b - a for a, b in zip(taus, taus[1:])]
    expected = (
        Fraction(2, 2 * family.n + 1) if family.tag == "a1" else Fraction(1, family.n + 1)
    )
    shift = float(expected) * (1 + 1e-3 if corrupt else 1)
    worst = 0.0
    witness = None
    for k, dv in enumerate(diffs):
        res = min(abs(dv - shift), abs(dv + shift))
        if res > worst:
            worst = res
            witness = {"step": k, "diff": repr(dv)}
    params["measured_shift"] = repr(sum(diffs) / len(diffs))
    params["expected_shift"] = f"{expected.numerator}/{expected.denominator}"
    status = "pass" if worst <= 1e-9 else "fail"
    return CheckReport(
        name, family.label(), params, status, worst,
        witness if status == "fail" else None,
    )


#: frozen Abel-translation cases: (family tag, lambda, start t, branch)
ABEL_CASES: list[tuple[str, complex, complex, str]] = [
    ("b1", 2.0, 2.7, "+"),
    ("d", 1.0, 1.3, "+"),
]


def check_abel_translation(
    family: BilliardFamily,
    lam: complex,
    steps: int = 20,
    seed: int = 0,
    *,
    start: complex = 2.7,
    branch: str = "+",
    corrupt: bool = False,
) -> CheckReport:
    """Orbit steps integrate the fiber differential to a constant mod lattice."""
    if family.tag not in ("b1", "b2", "d"):
        raise ValueError("Abel translation applies to the b and d families")
    name = f"abel:{family.label()}:lam={lam}"
    params = {"lam": repr(lam), "steps": steps, "seed": seed, "start": repr(start)}
    x0 = lift_fiber(family, lam, start, branch)
    rec = orbit(family, x0, steps)
    if rec.reason != "completed":
        return CheckReport(
            name, family.label(), params, "skipped", 0.0,
            {"reason": rec.reason, "steps_taken": rec.steps_taken},
        )
    model = elliptic_model(family, lam)
    rts = model.sorted_roots()
    for x in rec.points:
        t = curve_parameter(family, x).value
        if min(abs(t - r) for r in rts) < 1e-9:
            return CheckReport(
                name, family.label(), params, "skipped", 0.0,
                {"reason": "orbit parameter on a branch point"},
            )
    vals = abel_steps(family, lam, rec.points, model)
    if corrupt:
        vals = [v + 1e-3 * k for k, v in enumerate(vals)]
    base = vals[0]
    worst = 0.0
    witness = None
    for k, v in enumerate(vals):
        res = abs(model.lattice_reduce(v - base))
        if res > worst:
            worst = res
            witness = {"step": k, "value": repr(v)}
    status = "pass" if worst <= 1e-5 else "fail"
    return CheckReport(
        name, family.label(), params, status, worst,
        witness if status == "fail" else None,
    )


def check_area_form(
    family: BilliardFamily, samples: int = 200, seed: int = 0, *, corrupt: bool = False
) -> CheckReport:
    """Finite-difference pullback test of the invariant area form."""
    name = f"area:{family.label()}"
    rng = _rng_for(seed, name)
    worst = 0.0
    witness = None
    for k in range(samples):
        x = sample_phase_point(family, rng)
        try:
            res = area_pullback_residual(family, x)
        except Exception:
            continue
        if corrupt:
            res += 1e-3
        if res > worst:
            worst = res
            witness = {"sample": k, "q": repr(x.q), "p": repr(x.p)}
    status = "pass" if worst <= 1e-6 else "fail"
    return CheckReport(
        name, family.label(), {"samples": samples, "seed": seed}, status, worst,
        witness if status == "fail" else None,
    )


def check_jacobian(
    family: BilliardFamily, samples: int = 200, seed: int = 0, *, corrupt: bool = False
) -> CheckReport:
    """Closed-form half-step Jacobian against central finite differences."""
    name = f"jacobian:{family.label()}"
    rng = _rng_for(seed, name)
    worst = 0.0
    witness = None
    for k in range(samples):
        x = sample_phase_point(family, rng)
        try:
            closed = halfstep_jacobian(family, x)
            mat, _ = chart_jacobian(family, x)
        except Exception:
            continue
        fd = complex(np.linalg.det(mat))
        if corrupt:
            closed *= 1 + 1e-3
        res = abs(closed - fd) / max(1.0, abs(closed))
        if res > worst:
            worst = res
            witness = {"sample": k, "q": repr(x.q), "p": repr(x.p)}
    status = "pass" if worst <= 1e-6 else "fail"
    return CheckReport(
        name, family.label(), {"samples": samples, "seed": seed}, status, worst,
        witness if status == "fail" else None,
    )


# --------------------------------------------------------------------------
# table verification

def _incidence_table(tag: str) -> list[tuple]:
    """(lam, point, how many listed components must contain it)."""
    aff = ProjectivePoint.affine
    four3 = Fraction(4, 3)
    if tag == "b1":
        return [
            (INF, aff(1.0, -3.0), 2),
            (INF, aff(-1 / 3, -1 / 3), 2),
            (SphereValue(1), aff(0.0, -1.0), 2),
            (SphereValue(1), aff(0.0, 0.0), 2),
            (SphereValue(1), E_INFINITY, 2),
            (four3, aff(1 / 3, 1.0), 2),
            (four3, aff(0.0, 0.0), 2),
            (four3, aff(1.0, 1.0), 2),
            (four3, E_INFINITY, 2),
        ]
    if tag == "b2":
        return [
            (INF, aff(1j, 0.0), 2),
            (INF, aff(-1j, 0.0), 2),
        ]
    if tag == "c1":
        e = cmath.exp(-2j * math.pi / 3)
        eb = e.conjugate()
        lam = Fraction(27, 64)
        pts = [aff(eb / 2, e), aff(0.5, 1.0), aff(e / 2, eb), aff(eb, e), aff(e, eb), aff(1.0, 1.0)]
        return [(lam, p, 2) for p in pts]
    if tag == "c2":
        lam = Fraction(-9, 64)
        pts = [
            aff(1.25, 1.0),
            aff(-0.25, -0.5),
            aff(0.5, -2.0),
            aff(0.0, 0.0),
            aff(1.0, 1.0),
            E_INFINITY,
        ]
        return [(lam, p, 2) for p in pts]
    if tag == "d":
        return [
            (Fraction(-1, 3), aff(2 / 5, 8 / 5), 2),
            (Fraction(-9, 32), aff(1 / 10, -4 / 5), 2),
            (INF, aff(1.0, -8.0), 2),
            (INF, aff(-0.5, -2.0), 2),
            (INF, aff(1.0, 1.0), 2),
            (INF, E_INFINITY, 3),
        ]
    return []


def _component_value(poly, point: ProjectivePoint) -> float:
    """Scaled modulus of the homogenized component polynomial at the point."""
    d = poly.total_degree
    zc, wc, tc = point.coords
    total = 0j
    scale = 0.0
    for (i, j), c in poly.coeffs.items():
        term = complex(c) * zc**i * wc**j * tc ** (d - i - j)
        total += term
        scale = max(scale, abs(complex(c)))
    return abs(total) / max(scale, 1e-300)


def check_tables(
    family: BilliardFamily, seed: int = 0, *, corrupt: bool = False
) -> CheckReport:
    """Re-verify every tabulated critical value, critical point, base point
    and component-intersection point by direct evaluation."""
    name = f"tables:{family.label()}"
    worst = 0.0
    witness = None
    checks = 0
    shift = 1e-3 if corrupt else 0.0
    by_kind: dict[str, float] = {}

    def note(res: float, what: str, where):
        nonlocal worst, witness, checks
        checks += 1
        kind = what.split(":")[0]
        by_kind[kind] = max(by_kind.get(kind, 0.0), res)
        if res > worst:
            worst = res
            witness = {"what": what, "where": repr(where)}

    def displaced(p: ProjectivePoint) -> ProjectivePoint:
        if shift == 0.0:
            return p
        return ProjectivePoint(p.coords[0] + shift, p.coords[1], p.coords[2])

    integ = first_integral(family)
    for bp in indeterminacy_set(family):
        pt = displaced(bp)
        z, w, t = pt.coords
        note(abs(w * t - z * z), "incidence: base point on parabola", bp)
        for label, poly in (("num", integ.num), ("den", integ.den)):
            note(_component_value(poly, pt), f"incidence: base point kills {label}", bp)
    for lam in critical_values(family):
        for cp in true_critical_points(family, lam):
            pt = displaced(cp)
            recip = lam.is_inf
            if not recip:
                val = integ.eval(pt)
                vres = (
                    abs(val.value - lam.value) / max(1.0, abs(lam.value))
                    if not val.is_inf
                    else math.inf
                )
                note(vres, "value: critical value", cp)
            gz, gw = gradient_projective(family, pt, reciprocal=recip)
            note(max(abs(gz), abs(gw)), "gradient: at critical point", cp)
            hess = hessian_projective(family, pt, reciprocal=recip)
            deth = abs(np.linalg.det(hess))
            note(0.0 if deth >= 1e-6 else 1.0, "hessian: Morse nondegeneracy", cp)
        for ip in critical_indeterminacies(family, lam):
            if not any(ip.eq(bp) for bp in indeterminacy_set(family)):
                note(1.0, "incidence: critical indeterminacy is a base point", ip)
    for lam, point, expected in _incidence_table(family.tag):
        comps = critical_fiber_components(family, SphereValue.coerce(lam))
        pt = displaced(point)
        residuals = sorted(_component_value(c.poly, pt) for c in comps)
        note(residuals[min(expected, len(residuals)) - 1], f"incidence: on {expected} components", point)
    status = "pass" if worst <= 1e-8 else "fail"
    return CheckReport(
        name, family.label(),
        {"checks": checks, "seed": seed, "worst_by_kind": by_kind},
        status, worst,
        witness if status == "fail" else None,
    )


def check_equivalences(seed: int = 0, *, corrupt: bool = False) -> CheckReport:
    """The two projective equivalences intertwine integrals and billiards."""
    name = "equivalences"
    rng = _rng_for(seed, name)
    psi = b_family_equivalence()
    mc = c_family_equivalence()
    if corrupt:
        m = psi.matrix.copy()
        m[0, 0] += 1e-3
        from .geometry import ProjectiveMap

        psi = ProjectiveMap(m)
    b1, b2 = BilliardFamily("b1"), BilliardFamily("b2")
    c1, c2 = BilliardFamily("c1"), BilliardFamily("c2")
    worst = 0.0
    witness = None

    def note(res: float, what: str, where):
        nonlocal worst, witness
        if res > worst:
            worst = res
            witness = {"what": what, "where": repr(where)}

    count = 0
    attempts = 0
    while count < 100 and attempts < 2000:
        attempts += 1
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        w = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        pt = ProjectivePoint.affine(z, w)
        try:
            rb1 = eval_integral(b1, pt)
            rb2 = eval_integral(b2, psi(pt))
            rc2 = eval_integral(c2, pt)
            rc1 = eval_integral(c1, mc(pt))
        except Exception:
            continue
        if rb1.is_inf or rb2.is_inf or rc1.is_inf or rc2.is_inf:
            continue
        note(
            abs(rb1.value - rb2.value) / max(1.0, abs(rb1.value)),
            "b-integral equivalence",
            pt,
        )
        note(
            abs(-3 * rc2.value - rc1.value) / max(1.0, abs(rc1.value)),
            "c-integral equivalence",
            pt,
        )
        note(abs(eval_integral(b1, pt).value - rb1.value), "identity sanity", pt)
        count += 1
    # lifted-map commutation on phase points
    count = 0
    attempts = 0
    while count < 25 and attempts < 500:
        attempts += 1
        x = sample_phase_point(b1, rng)
        try:
            fx = billiard_map(b1, x)
            lifted = PhasePoint(psi(x.q), psi(x.p))
            fy = billiard_map(b2, lifted)
        except Exception:
            # a corrupted equivalence throws the lift off the parabola;
            # count that as a failing residual rather than spinning
            note(1.0, "billiard-map lift rejected", x.q)
            continue
        img = PhasePoint(psi(fx.q), psi(fx.p))
        qres = float(np.linalg.norm(np.cross(img.q.coords, fy.q.coords)))
        pres = float(np.linalg.norm(np.cross(img.p.coords, fy.p.coords)))
        note(max(qres, pres), "billiard-map commutation", x.q)
        count += 1
    status = "pass" if worst <= 1e-9 else "fail"
    return CheckReport(
        name, None, {"samples": 100, "seed": seed}, status, worst,
        witness if status == "fail" else None,
    )


# --------------------------------------------------------------------------
# suite assembly

@dataclass
class CheckSuite:
    """Ordered list of named checks with one seed and a tolerance policy;
    running the same suite twice gives byte-identical reports."""

    seed: int
    tolerance: Tolerance = DEFAULT_TOL
    entries: list[tuple[str, Callable[[], CheckReport]]] = field(default_factory=list)

    def add(self, name: str, fn: Callable[[], CheckReport]) -> None:
        self.entries.append((name, fn))


def default_suite(seed: int = 42, tolerance: Tolerance = DEFAULT_TOL) -> CheckSuite:
    suite = CheckSuite(seed, tolerance)
    families = [
        BilliardFamily("a1", 1),
        BilliardFamily("a1", 2),
        BilliardFamily("a1", 3),
        BilliardFamily("a2", 1),
        BilliardFamily("a2", 2),
        BilliardFamily("a2", 3),
        BilliardFamily("b1"),
        BilliardFamily("b2"),
        BilliardFamily("c1"),
        BilliardFamily("c2"),
        BilliardFamily("d"),
    ]
    base = [
        BilliardFamily("a1", 1),
        BilliardFamily("a2", 1),
        BilliardFamily("b1"),
        BilliardFamily("b2"),
        BilliardFamily("c1"),
        BilliardFamily("c2"),
        BilliardFamily("d"),
    ]
    for fam in families:
        suite.add(
            f"involution:{fam.label()}",
            lambda fam=fam: check_involution(fam, 1000, seed),
        )
    for fam in base:
        for lam, t0, br in CONSERVATION_CASES[fam.tag]:
            suite.add(
                f"conservation:{fam.label()}:lam={lam}",
                lambda fam=fam, lam=lam, t0=t0, br=br: check_conservation(
                    fam, lam, 500, seed, start=t0, branch=br, tol=tolerance
                ),
            )
    for tag, n, lam, t0 in TRANSLATION_CASES:
        fam = BilliardFamily(tag, n)
        suite.add(
            f"translation:{fam.label()}:lam={lam}",
            lambda fam=fam, lam=lam, t0=t0: check_translation(fam, lam, 50, seed, start=t0),
        )
    for tag, lam, t0, br in ABEL_CASES:
        fam = BilliardFamily(tag)
        suite.add(
            f"abel:{fam.label()}:lam={lam}",
            lambda fam=fam, lam=lam, t0=t0, br=br: check_abel_translation(
                fam, lam, 20, seed, start=t0, branch=br
            ),
        )
    for fam in base:
        suite.add(f"area:{fam.label()}", lambda fam=fam: check_area_form(fam, 200, seed))
    for fam in base:
        suite.add(f"jacobian:{fam.label()}", lambda fam=fam: check_jacobian(fam, 200, seed))
    for fam in base:
        suite.add(f"tables:{fam.label()}", lambda fam=fam: check_tables(fam, seed))
    suite.add("equivalences", lambda: check_equivalences(seed))
    return suite


def run_suite(suite: CheckSuite, names: list[str] | None = None) -> list[CheckReport]:
    """Run (a filtered subset of) the suite in order."""
    reports = []
    for name, fn in suite.entries:
        if names is not None and not any(name.startswith(n) for n in names):
            continue
        reports.append(fn())
    return reports
