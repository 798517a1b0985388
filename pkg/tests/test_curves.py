import math
import random
from fractions import Fraction

import numpy as np
import pytest

from dualbill.billiards import BilliardFamily
from dualbill.curves import (
    branch_points,
    component_product_residual,
    critical_fiber_components,
    curve_parameter,
    elliptic_model,
    elliptic_poly,
    fiber_type,
    lattice_closure_residual,
    level_curve_model,
    lift_fiber,
    parametrize_level,
    point_on_level,
    sheet_sqrt,
    tangency_gap,
)
from dualbill.geometry import E_INFINITY, ProjectivePoint, conic_point
from dualbill.integrals import eval_integral
from dualbill.numerics import INF, SphereValue
from dualbill.verify import _rng_for

PARAMETRIZED = [
    (BilliardFamily("a1", 1), (1.0, 2.0, 0.5 + 1.0j)),
    (BilliardFamily("a1", 2), (1.0, 2.0, 0.5 + 1.0j)),
    (BilliardFamily("a2", 1), (1.0, 2.0, 0.5 + 1.0j)),
    (BilliardFamily("a2", 2), (1.0, 2.0, 0.5 + 1.0j)),
    (BilliardFamily("b1"), (2.0, 3.0, 0.5 + 0.5j)),
    (BilliardFamily("b2"), (2.0, 3.0, 0.5 + 0.5j)),
    (BilliardFamily("d"), (1.0, 3.0, 0.5 + 0.3j)),
]


class TestParametrize:
    def test_a1_spot_value(self):
        q = parametrize_level(BilliardFamily("a1", 1), 1.0, 1.0)
        z, w = q.affine_pair()
        assert abs(z - 8j) <= 1e-12
        assert abs(w) <= 1e-12

    def test_b1_base_point_parameter(self):
        q = parametrize_level(BilliardFamily("b1"), 2.0, 2.0)  # t = lam/(lam-1)
        assert q.eq(ProjectivePoint.affine(0.0, 0.0))

    def test_d_pole_gives_infinity_point(self):
        q = parametrize_level(BilliardFamily("d"), 1.5, -4.0)
        assert q.eq(E_INFINITY)

    def test_on_curve_residual(self):
        rng = _rng_for(7, "on-curve")
        for fam, lams in PARAMETRIZED:
            for lam in lams:
                for _ in range(70):
                    t = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
                    pt = parametrize_level(fam, lam, t)
                    try:
                        v = eval_integral(fam, pt)
                    except Exception:
                        continue
                    if v.is_inf:
                        continue
                    assert abs(v.value - lam) <= 1e-9 * max(1.0, abs(lam))

    def test_critical_value_rejected(self):
        with pytest.raises(ValueError):
            parametrize_level(BilliardFamily("b1"), 4.0 / 3.0, 0.5)
        with pytest.raises(ValueError):
            parametrize_level(BilliardFamily("d"), -0.25, 0.5)

    def test_c_family_rejected(self):
        with pytest.raises(ValueError):
            parametrize_level(BilliardFamily("c1"), 1.0, 0.5)

    def test_custom_coefficients_still_on_curve(self):
        # arbitrary coefficient lists parametrize the generalized level
        # curve; only the canonical coefficients make it billiard-invariant
        from dualbill.integrals import BiPoly

        cs = [complex(-2.5, 0.3)]
        lam = 1.3
        z_, w_ = BiPoly.var_z(), BiPoly.var_w()
        num = (w_ - z_ * z_).power(3)
        den = (w_ - z_ * z_ * cs[0]).power(2)
        for t in (0.7, 1.9 + 0.4j):
            pt = parametrize_level(BilliardFamily("a1", 1), lam, t, coefficients=cs)
            z, w = pt.affine_pair()
            val = num(z, w) / den(z, w)
            assert abs(val - lam) <= 1e-9 * max(1.0, abs(lam))

    def test_base_point_incidence(self):
        lam = 2.0
        b1 = BilliardFamily("b1")
        assert parametrize_level(b1, lam, 0.0).eq(ProjectivePoint.affine(0, 0))
        assert parametrize_level(b1, lam, lam / (lam - 1)).eq(ProjectivePoint.affine(0, 0))
        for r in np.roots([1.0, -4 * lam, 4 * lam]):
            assert parametrize_level(b1, lam, complex(r)).eq(ProjectivePoint.affine(1, 1))
        assert parametrize_level(b1, lam, 4.0).eq(E_INFINITY)
        assert parametrize_level(b1, lam, INF).eq(E_INFINITY)
        d = BilliardFamily("d")
        lam = 1.0
        for r in np.roots([9 * lam**2 + lam, 36 * lam**2 - 3 * lam, -36 * lam, 9.0]):
            assert parametrize_level(d, lam, complex(r)).eq(ProjectivePoint.affine(1, 1))
        for r in np.roots([lam, 12 * lam, -9.0]):
            assert parametrize_level(d, lam, complex(r)).eq(ProjectivePoint.affine(0, 0))
        assert parametrize_level(d, lam, -4.0).eq(E_INFINITY)
        a2 = BilliardFamily("a2", 1)
        assert parametrize_level(a2, 1.5, 0.0).eq(ProjectivePoint.affine(0, 0))


class TestLift:
    def test_a1_lift_examples(self):
        fam = BilliardFamily("a1", 1)
        minus = lift_fiber(fam, 1.0, 1.0, "-")
        assert minus.p.eq(conic_point(0.0))
        plus = lift_fiber(fam, 1.0, 1.0, "+")
        assert plus.p.eq(ProjectivePoint.affine(16j, -256.0))

    def test_a2_lift_example(self):
        fam = BilliardFamily("a2", 1)
        x = lift_fiber(fam, 1.0, 1.0)
        z, _ = x.q.affine_pair()
        assert x.p.eq(conic_point(2.0 * z))

    def test_lift_incidence(self):
        rng = _rng_for(8, "lift")
        for fam, lams in PARAMETRIZED:
            for _ in range(25):
                t = complex(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5))
                branch = "+" if rng.random() < 0.5 else "-"
                try:
                    x = lift_fiber(fam, lams[0], t, branch)
                except ValueError:
                    continue
                x.validate()

    def test_curve_parameter_inverts_lift(self):
        for fam, lams in PARAMETRIZED:
            for t in (0.8, 1.9 + 0.3j):
                x = lift_fiber(fam, lams[0], t, "+")
                got = curve_parameter(fam, x)
                if fam.tag in ("b1", "b2", "d"):
                    assert abs(got.value - t) <= 1e-9 * max(1.0, abs(t))
                else:
                    assert abs(got.value - t) <= 1e-9 * max(1.0, abs(t))


class TestBranchPoints:
    def test_b1_example(self):
        got = branch_points(BilliardFamily("b1"), 2.0)
        finite = sorted(b.value.real for b in got if not b.is_inf)
        assert finite == pytest.approx(
            [4 - 2 * math.sqrt(2), 2.0, 4 + 2 * math.sqrt(2)], abs=1e-9
        )
        assert any(b.is_inf for b in got)

    def test_a2_ramification(self):
        got = branch_points(BilliardFamily("a2", 1), 1.3)
        assert got[0] == SphereValue(0.0) and got[1].is_inf

    def test_d_count(self):
        assert len(branch_points(BilliardFamily("d"), 1.0)) == 4

    def test_a1_c_split(self):
        assert branch_points(BilliardFamily("a1", 2), 1.3) == []
        assert branch_points(BilliardFamily("c1"), 1.3) == []

    def test_collision_scaling(self):
        # the tangency gap collapses like sqrt(offset) at a branch parameter
        fam = BilliardFamily("b1")
        lam = 0.45
        for b in branch_points(fam, lam):
            t0 = 1e10 if b.is_inf else b.value
            g11 = tangency_gap(fam, lam, t0 + 1e-11 if not b.is_inf else 1e11)
            assert g11 <= 1e-5
        for b in branch_points(BilliardFamily("d"), -0.15):
            t0 = b.value
            g12 = tangency_gap(BilliardFamily("d"), -0.15, t0 + 1e-12)
            assert g12 <= 1e-5

    def test_separation_away_from_branch(self):
        rng = _rng_for(9, "sep")
        fam = BilliardFamily("b1")
        lam = 2.0
        bps = [b.value for b in branch_points(fam, lam) if not b.is_inf]
        count = 0
        while count < 20:
            t = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if min(abs(t - b) for b in bps) < 0.3:
                continue
            if abs(t) > 2.8:
                continue
            assert tangency_gap(fam, lam, t) >= 1e-3
            count += 1


class TestEllipticModel:
    def test_poly_formula_b(self):
        lam = 2.0
        got = elliptic_poly(BilliardFamily("b1"), lam)
        want = np.polymul([1 - lam, lam], [1, -4 * lam, 4 * lam])
        assert np.allclose(got, want)

    def test_branch_list_matches_roots(self):
        m = elliptic_model(BilliardFamily("b1"), 2.0)
        finite = [b for b in m.branch_parameters if not b.is_inf]
        assert len(finite) == 3
        assert any(b.is_inf for b in m.branch_parameters)  # cubic model
        md = elliptic_model(BilliardFamily("d"), 1.0)
        assert len(md.branch_parameters) == 4
        assert not any(b.is_inf for b in md.branch_parameters)

    def test_periods_form_lattice(self):
        for fam, lam in ((BilliardFamily("b1"), 2.0), (BilliardFamily("d"), 1.0)):
            m = elliptic_model(fam, lam)
            w1, w2 = m.periods
            # genuinely independent generators
            det = w1.real * w2.imag - w1.imag * w2.real
            assert abs(det) > 1e-12
            assert lattice_closure_residual(m) <= 1e-7

    def test_period_against_independent_oracle(self):
        # high-precision oracle: on [4-2*sqrt(2), 2] both simple zeros of p
        # are absorbed by t = r0 + (r1-r0) sin^2(theta), leaving a smooth
        # integrand for mpmath
        import mpmath

        m = elliptic_model(BilliardFamily("b1"), 2.0)
        mpmath.mp.dps = 30
        r0 = 4 - 2 * mpmath.sqrt(2)
        r1 = mpmath.mpf(2)
        r2 = 4 + 2 * mpmath.sqrt(2)

        def g(theta):
            t = r0 + (r1 - r0) * mpmath.sin(theta) ** 2
            return 2 / mpmath.sqrt(r2 - t)

        oracle = float(2 * mpmath.quad(g, [0, mpmath.pi / 2]))
        periods = sorted((abs(m.periods[0]), abs(m.periods[1])))
        assert min(abs(p - oracle) for p in periods) < 1e-8

    def test_degeneration_towards_critical_value(self):
        # two branch parameters of the b-model collide as lam -> 1
        gaps = []
        for eps in (1e-2, 1e-4, 1e-6):
            rts = np.roots([1.0, -4 * (1 + eps), 4 * (1 + eps)])
            gaps.append(abs(rts[0] - rts[1]))
        # square-root collision rate: each 100x smaller eps shrinks the gap 10x
        assert gaps[1] == pytest.approx(0.1 * gaps[0], rel=0.05)
        assert gaps[2] == pytest.approx(0.1 * gaps[1], rel=0.05)

    def test_c_family_unsupported(self):
        with pytest.raises(ValueError):
            elliptic_model(BilliardFamily("c1"), 1.0)

    def test_sheet_sqrt_consistency(self):
        for fam, lam, t0 in (
            (BilliardFamily("b1"), 2.0, 2.7),
            (BilliardFamily("b2"), 2.0, 2.7),
            (BilliardFamily("d"), 1.0, 1.3),
        ):
            coeffs = elliptic_poly(fam, lam)
            for branch in ("+", "-"):
                x = lift_fiber(fam, lam, t0, branch)
                t, y = sheet_sqrt(fam, lam, x)
                assert abs(t - t0) < 1e-9
                assert abs(y * y - complex(np.polyval(coeffs, t))) <= 1e-9 * max(
                    1.0, abs(y) ** 2
                )


class TestCriticalComponents:
    @pytest.mark.parametrize(
        "tag,lam",
        [
            ("b1", 1), ("b1", Fraction(4, 3)), ("b1", INF), ("b1", 0),
            ("b2", 1), ("b2", Fraction(4, 3)), ("b2", INF),
            ("c1", Fraction(27, 64)), ("c1", INF),
            ("c2", Fraction(-9, 64)), ("c2", INF),
            ("d", Fraction(-1, 3)), ("d", Fraction(-9, 32)),
            ("d", Fraction(-1, 4)), ("d", INF),
            ("a1", INF), ("a2", INF),
        ],
    )
    def test_component_products(self, tag, lam):
        fam = BilliardFamily.parse(tag, 2 if tag in ("a1", "a2") else None)
        assert component_product_residual(fam, lam) <= 1e-8

    def test_component_counts(self):
        assert len(critical_fiber_components(BilliardFamily("b1"), Fraction(4, 3))) == 2
        assert len(critical_fiber_components(BilliardFamily("d"), Fraction(-1, 3))) == 2
        assert len(critical_fiber_components(BilliardFamily("d"), INF)) == 3
        assert len(critical_fiber_components(BilliardFamily("c2"), Fraction(-9, 64))) == 3

    def test_regular_value_rejected(self):
        with pytest.raises(ValueError):
            critical_fiber_components(BilliardFamily("b1"), 7.0)

    def test_parametrizations_lie_on_components(self):
        rng = _rng_for(10, "comp-param")
        cases = [
            (BilliardFamily("b1"), 1), (BilliardFamily("b1"), Fraction(4, 3)),
            (BilliardFamily("d"), Fraction(-1, 3)),
            (BilliardFamily("d"), Fraction(-9, 32)),
            (BilliardFamily("d"), INF),
            (BilliardFamily("c2"), Fraction(-9, 64)),
            (BilliardFamily("b2"), 1),
        ]
        for fam, lam in cases:
            for comp in critical_fiber_components(fam, lam):
                if comp.parametrize is None:
                    continue
                poly = comp.poly
                d = poly.total_degree
                scale = max(abs(complex(c)) for c in poly.coeffs.values())
                for _ in range(25):
                    t = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
                    pt = comp.parametrize(t)
                    zc, wc, tc = pt.coords
                    val = sum(
                        complex(c) * zc**i * wc**j * tc ** (d - i - j)
                        for (i, j), c in poly.coeffs.items()
                    )
                    assert abs(val) <= 1e-8 * scale

    def test_quartic_component_against_parametrization(self):
        # the implicit quartic of the d-family level -9/32 is derived by
        # exact division; its vanishing on the published parametrization is
        # the independent consistency check
        fam = BilliardFamily("d")
        comps = critical_fiber_components(fam, Fraction(-9, 32))
        quartic = next(c for c in comps if c.degree == 4)
        assert quartic.poly.is_exact()
        pt = quartic.parametrize(-4.0)
        assert pt.eq(ProjectivePoint.affine(0.1, -0.8))  # the critical point


class TestFiberTables:
    def test_counts(self):
        assert fiber_type(BilliardFamily("c1"), 1.0).component_count == 2
        assert fiber_type(BilliardFamily("d"), INF).component_count == 5
        assert fiber_type(BilliardFamily("b1"), 1).component_count == 3
        assert fiber_type(BilliardFamily("c1"), Fraction(27, 64)).component_count == 6
        assert fiber_type(BilliardFamily("d"), Fraction(-9, 32)).component_count == 3
        assert fiber_type(BilliardFamily("a1", 1), 2.0).component_count == 2
        assert fiber_type(BilliardFamily("a2", 1), 2.0).component_count == 1

    def test_genus_entries(self):
        model = fiber_type(BilliardFamily("c1"), 1.0)
        assert all(c.genus == 1 and c.covering == "bijective" for c in model.components)
        model = fiber_type(BilliardFamily("b1"), 2.0)
        assert model.components[0].genus == 1
        assert model.components[0].covering == "double"
        assert len(model.components[0].branch_parameters) == 4

    def test_level_curve_model_kinds(self):
        assert level_curve_model(BilliardFamily("b1"), 2.0).kind == "rational-parametrized"
        assert level_curve_model(BilliardFamily("c1"), 2.0).kind == "elliptic"
        assert level_curve_model(BilliardFamily("b1"), 1.0).kind == "reducible"


class TestSlicing:
    def test_c_families(self):
        rng = random.Random(3)
        for tag in ("c1", "c2"):
            fam = BilliardFamily(tag)
            pt = point_on_level(fam, 1.0, rng)
            v = eval_integral(fam, pt)
            assert abs(v.value - 1.0) <= 1e-8


class TestSpecFidelityExtras:
    def test_elliptic_poly_formula_d(self):
        import numpy as np
        from dualbill.curves import elliptic_poly
        from dualbill.billiards import BilliardFamily

        lam = 1.0
        got = elliptic_poly(BilliardFamily("d"), lam)
        want = np.polymul(
            [1.0, 4.0],
            [9 * lam**2 + lam, 36 * lam**2 - 3 * lam, -36 * lam, 9.0],
        )
        assert np.allclose(got, want)

    def test_swapping_cycles_permutes_generators(self):
        from dualbill.billiards import BilliardFamily
        from dualbill.curves import elliptic_model, ramification_connection

        m = elliptic_model(BilliardFamily("b1"), 2.0)
        rts = m.sorted_roots()
        gaps = [abs(a - b) for i, a in enumerate(rts) for b in rts[i + 1:]]
        clr = 0.12 * min(gaps)
        w2_first = 2 * ramification_connection(m._sqrt, rts[1], rts[2], clr)
        w1_second = 2 * ramification_connection(m._sqrt, rts[0], rts[1], clr)
        assert abs(w2_first - m.periods[1]) <= 1e-9 * max(1, abs(m.periods[1]))
        assert abs(w1_second - m.periods[0]) <= 1e-9 * max(1, abs(m.periods[0]))


class TestCEquivalenceOnComponents:
    def test_c_map_carries_critical_conics(self):
        # the c-family equivalence must carry the three critical conics of
        # the c2 integral onto the three critical conics of the c1 integral
        from fractions import Fraction

        from dualbill.curves import _substitute_projective
        from dualbill.geometry import c_family_equivalence

        mc_inv = c_family_equivalence().inverse().matrix
        c1_comps = critical_fiber_components(BilliardFamily("c1"), Fraction(27, 64))
        c2_comps = critical_fiber_components(BilliardFamily("c2"), Fraction(-9, 64))
        for comp in c2_comps:
            image = _substitute_projective(comp.poly, mc_inv)
            residuals = [image.proportional_residual(t.poly) for t in c1_comps]
            assert min(residuals) <= 1e-9


class TestTauRecovery:
    def test_square_relation(self):
        # the recovered fiber parameter satisfies tau^2 (z^2 - w) = z^2
        fam = BilliardFamily("a1", 2)
        for t0 in (1.9, 0.7 + 0.4j):
            x = lift_fiber(fam, 1.5, t0, "+")
            tau = curve_parameter(fam, x).value
            z, w = x.q.affine_pair()
            assert abs(tau * tau * (z * z - w) - z * z) <= 1e-9 * abs(z * z)


class TestComponentSingularPoints:
    """Cusps and double points of the critical components, verified by
    vanishing gradients of the component polynomials."""

    @staticmethod
    def _grad_at(poly, z, w):
        return complex(poly.diff_z()(z, w)), complex(poly.diff_w()(z, w))

    def test_b1_level1_cubic_cusp(self):
        comps = critical_fiber_components(BilliardFamily("b1"), 1)
        cubic = next(c for c in comps if c.degree == 3)
        assert abs(cubic.poly(1.0, 1.0)) < 1e-14
        gz, gw = self._grad_at(cubic.poly, 1.0, 1.0)
        assert max(abs(gz), abs(gw)) < 1e-14
        # the cusp parameter is the double root t = 2 of the parametrization
        assert cubic.parametrize(2.0).eq(ProjectivePoint.affine(1.0, 1.0))

    def test_d_932_quartic_cusp(self):
        comps = critical_fiber_components(BilliardFamily("d"), Fraction(-9, 32))
        quartic = next(c for c in comps if c.degree == 4)
        assert abs(quartic.poly(1.0, 1.0)) < 1e-12
        gz, gw = self._grad_at(quartic.poly, 1.0, 1.0)
        assert max(abs(gz), abs(gw)) < 1e-12
        assert quartic.parametrize(-16.0 / 7.0).eq(ProjectivePoint.affine(1.0, 1.0))

    def test_d_infinity_cubic_cusp(self):
        comps = critical_fiber_components(BilliardFamily("d"), INF)
        cubic = next(c for c in comps if c.degree == 3)
        assert abs(cubic.poly(1.0, 1.0)) < 1e-14
        gz, gw = self._grad_at(cubic.poly, 1.0, 1.0)
        assert max(abs(gz), abs(gw)) < 1e-14

    def test_c_cubic_double_points(self):
        from dualbill.integrals import BiPoly

        # the c1 pole cubic has its double point at [1:0:0]: in the chart
        # z = 1 the homogenization t^3 + w^3 - 2wt has vanishing gradient at
        # the origin
        comps = critical_fiber_components(BilliardFamily("c1"), INF)
        cubic = comps[0].poly
        chart = cubic.homogenized_chart(3, 0)  # coords (w, t)
        gz, gw = complex(chart.diff_z()(0.0, 0.0)), complex(chart.diff_w()(0.0, 0.0))
        assert abs(chart(0.0, 0.0)) < 1e-14
        assert max(abs(gz), abs(gw)) < 1e-14
        # the c2 pole cubic has its double point at (1/2, 1)
        comps = critical_fiber_components(BilliardFamily("c2"), INF)
        cubic = comps[0].poly
        assert abs(cubic(0.5, 1.0)) < 1e-14
        gz, gw = self._grad_at(cubic, 0.5, 1.0)
        assert max(abs(gz), abs(gw)) < 1e-14


class TestCubicTangencyParameters:
    def test_c1_pole_cubic_tangency_pair(self):
        # points of the c1 pole curve are z = (1+w^3)/(2w); their two
        # tangency parameters on the parabola are exactly w^2 and 1/w
        from dualbill.geometry import tangency_points

        rng = _rng_for(23, "cubic-tangency")
        for _ in range(25):
            w = complex(rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0))
            z = (1.0 + w**3) / (2.0 * w)
            if abs(z * z - w) < 1e-3:
                continue
            pair = tangency_points(ProjectivePoint.affine(z, w))
            got = sorted(
                (pair.plus.z_sphere().value, pair.minus.z_sphere().value),
                key=lambda c: (round(c.real, 9), round(c.imag, 9)),
            )
            want = sorted(
                (w * w, 1.0 / w), key=lambda c: (round(c.real, 9), round(c.imag, 9))
            )
            for g, t in zip(got, want):
                assert abs(g - t) <= 1e-9 * max(1.0, abs(t))


class TestReducedParametrization:
    def test_b1_one_third_cancellation(self):
        # at level 1/3 the quartic parametrization degenerates smoothly to
        # (t(2t+1)/((t-1)(4-t)), -3t^2(2t+1)/(4-t)^2)
        lam = 1.0 / 3.0
        for t in (0.7, 2.5, -1.2 + 0.4j):
            got = parametrize_level(BilliardFamily("b1"), lam, t)
            want = ProjectivePoint.affine(
                t * (2 * t + 1) / ((t - 1) * (4 - t)),
                -3 * t * t * (2 * t + 1) / (4 - t) ** 2,
            )
            assert got.eq(want)


class TestBEquivalenceOnParabola:
    def test_maps_parabola_to_parabola(self):
        from dualbill.geometry import b_family_equivalence, on_conic

        psi = b_family_equivalence()
        rng = _rng_for(24, "psi-parabola")
        for _ in range(50):
            z0 = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            img = psi(conic_point(z0))
            assert on_conic(img)


class TestLevelCurveImplicit:
    def test_elliptic_kind_carries_implicit_polynomial(self):
        model = level_curve_model(BilliardFamily("c1"), 2.0)
        assert model.kind == "elliptic"
        assert model.implicit is not None
        rng = _rng_for(26, "implicit")
        import random as _random

        pt = point_on_level(BilliardFamily("c1"), 2.0, _random.Random(5))
        z, w = pt.affine_pair()
        scale = max(abs(complex(c)) for c in model.implicit.coeffs.values())
        assert abs(model.implicit(z, w)) <= 1e-7 * scale * max(1.0, abs(z), abs(w)) ** 6


class TestConicContactStructure:
    """At the shared base points the critical conics meet tangentially;
    at the tabulated extra intersection points they meet transversally."""

    @staticmethod
    def _gradient(poly, pt):
        # gradient of the homogenized polynomial in the chart where the
        # point has its largest coordinate
        import numpy as np

        chart = int(np.argmax(np.abs(pt.coords)))
        d = poly.total_degree
        cp = poly.homogenized_chart(d, chart)
        pivot = pt.coords[chart]
        others = [c / pivot for i, c in enumerate(pt.coords) if i != chart]
        return complex(cp.diff_z()(*others)), complex(cp.diff_w()(*others))

    @staticmethod
    def _angle(g1, g2):
        cross = g1[0] * g2[1] - g1[1] * g2[0]
        n1 = abs(g1[0]) + abs(g1[1])
        n2 = abs(g2[0]) + abs(g2[1])
        return abs(cross) / (n1 * n2)

    def test_c2_conics(self):
        comps = critical_fiber_components(BilliardFamily("c2"), Fraction(-9, 64))
        polys = [c.poly for c in comps]
        tangency_pts = [
            ProjectivePoint.affine(0.0, 0.0),
            ProjectivePoint.affine(1.0, 1.0),
            E_INFINITY,
        ]
        transversal_pts = [
            ProjectivePoint.affine(1.25, 1.0),
            ProjectivePoint.affine(-0.25, -0.5),
            ProjectivePoint.affine(0.5, -2.0),
        ]
        for pts, expect_tangent in ((tangency_pts, True), (transversal_pts, False)):
            for pt in pts:
                on = [
                    p for p in polys
                    if abs(
                        sum(
                            complex(c)
                            * pt.coords[0] ** i
                            * pt.coords[1] ** j
                            * pt.coords[2] ** (p.total_degree - i - j)
                            for (i, j), c in p.coeffs.items()
                        )
                    ) <= 1e-10
                ]
                assert len(on) == 2
                angle = self._angle(
                    self._gradient(on[0], pt), self._gradient(on[1], pt)
                )
                if expect_tangent:
                    assert angle <= 1e-10
                else:
                    assert angle >= 1e-2


class TestBranchTangencyToPoleConic:
    def test_d_level_branches_tangent_to_conic_at_origin(self):
        # both local branches of a regular d-level curve at the origin are
        # tangent to the conic w = -8 z^2 (slope 0 through the origin, with
        # matching curvature -8 at leading order)
        import numpy as np

        lam = 1.0
        fam = BilliardFamily("d")
        h = 1e-5
        for r in np.roots([lam, 12 * lam, -9.0]):
            t0 = complex(r)
            zp, wp = parametrize_level(fam, lam, t0 + h).affine_pair()
            zm, wm = parametrize_level(fam, lam, t0 - h).affine_pair()
            dz = (zp - zm) / (2 * h)
            dw = (wp - wm) / (2 * h)
            assert abs(dw / dz) <= 1e-3  # tangent line w = 0 at the origin
            # curvature of the branch matches the conic: w ~ -8 z^2
            assert abs(wp / (zp * zp) + 8.0) <= 1e-2
