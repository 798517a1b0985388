import random

import numpy as np
import pytest

from dualbill.billiards import BilliardFamily
from dualbill.geometry import (
    E_INFINITY,
    OnConicError,
    PhasePoint,
    ProjectivePoint,
    b_family_equivalence,
    c_family_equivalence,
    conic_point,
    line_contains,
    on_conic,
    order3_symmetries,
    tangency_points,
    tangent_line,
)
from dualbill.integrals import eval_integral, indeterminacy_set


class TestProjectivePoint:
    def test_canonical_representative(self):
        p = ProjectivePoint(2.0, 4.0, 1.0)
        assert max(abs(c) for c in p.coords) == 1.0

    def test_projective_equality(self):
        assert ProjectivePoint(1, 2, 3).eq(ProjectivePoint(2, 4, 6))
        assert not ProjectivePoint(1, 2, 3).eq(ProjectivePoint(1, 2, 4))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            ProjectivePoint(0, 0, 0)

    def test_affine_pair_at_infinity(self):
        with pytest.raises(ValueError):
            E_INFINITY.affine_pair()

    def test_conic_point_far_out(self):
        p = conic_point(1e8)
        assert on_conic(p)
        assert abs(p.z_sphere().value - 1e8) < 1e-3


class TestTangentLine:
    def test_vertex(self):
        line = tangent_line(conic_point(0.0))
        assert abs(np.dot(line, [1, 0, 1])) == pytest.approx(0.0, abs=1e-15)
        assert line[0] == 0 and line[2] == 0  # the line w = 0

    def test_at_one(self):
        line = tangent_line(conic_point(1.0))
        # w = 2z - 1 contains (1, 1) and (0, -1)
        assert line_contains(line, ProjectivePoint.affine(1.0, 1.0))
        assert line_contains(line, ProjectivePoint.affine(0.0, -1.0))

    def test_at_infinity(self):
        line = tangent_line(E_INFINITY)
        assert line[0] == 0 and line[1] == 0  # the infinity line t = 0

    def test_off_conic_rejected(self):
        with pytest.raises(OnConicError):
            tangent_line(ProjectivePoint.affine(1.0, 2.0))


class TestTangencyPoints:
    def test_example_basic(self):
        pair = tangency_points(ProjectivePoint.affine(0.0, -1.0))
        zs = sorted((pair.plus.z_sphere().value.real, pair.minus.z_sphere().value.real))
        assert zs == pytest.approx([-1.0, 1.0])

    def test_example_8i(self):
        pair = tangency_points(ProjectivePoint.affine(8j, 0.0))
        assert pair.plus.eq(ProjectivePoint.affine(16j, -256.0))
        assert pair.minus.eq(conic_point(0.0))

    def test_symmetric_pair(self):
        pair = tangency_points(ProjectivePoint.affine(0.0, 1.0))
        got = {pair.plus.z_sphere().value, pair.minus.z_sphere().value}
        assert any(abs(g - 1j) < 1e-14 for g in got)
        assert any(abs(g + 1j) < 1e-14 for g in got)

    def test_on_conic_rejected(self):
        with pytest.raises(OnConicError):
            tangency_points(conic_point(1.5))

    def test_infinity_line_point(self):
        pair = tangency_points(ProjectivePoint(1.0, 4.0, 0.0))
        assert pair.plus.eq(E_INFINITY)
        assert pair.minus.eq(conic_point(2.0))

    def test_incidence_property(self):
        rng = random.Random(5)
        checked = 0
        while checked < 1000:
            z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
            w = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
            if abs(z * z - w) < 1e-4:
                continue
            q = ProjectivePoint.affine(z, w)
            pair = tangency_points(q)
            for p in (pair.plus, pair.minus):
                line = tangent_line(p)
                res = abs(np.dot(line, q.coords))
                scale = float(np.linalg.norm(line) * np.linalg.norm(q.coords))
                assert res <= 1e-10 * scale
            checked += 1

    def test_near_branch_flag(self):
        q = ProjectivePoint.affine(1.0, 1.0 - 1e-6)
        assert tangency_points(q).near_branch


class TestEquivalences:
    def test_b_matrix_affine_action(self):
        psi = b_family_equivalence()
        rng = random.Random(1)
        for _ in range(20):
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            w = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            img = psi.apply_affine(z, w)
            den = 2 * z - w - 1
            want = ProjectivePoint.affine(1j * (w - 1) / den, (2 * z + w + 1) / den)
            assert img.eq(want)

    def test_b_invertible(self):
        psi = b_family_equivalence()
        assert abs(psi.det()) > 1e-6
        comp = psi.compose(psi.inverse())
        assert comp.is_projective_identity(1e-12)

    def test_b_integral_identity(self):
        psi = b_family_equivalence()
        b1, b2 = BilliardFamily("b1"), BilliardFamily("b2")
        rng = random.Random(2)
        checked = 0
        while checked < 100:
            pt = ProjectivePoint.affine(
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            )
            try:
                v1 = eval_integral(b1, pt)
                v2 = eval_integral(b2, psi(pt))
            except Exception:
                continue
            if v1.is_inf or v2.is_inf:
                continue
            assert abs(v1.value - v2.value) <= 1e-9 * max(1.0, abs(v1.value))
            checked += 1

    def test_c_integral_identity(self):
        mc = c_family_equivalence()
        c1, c2 = BilliardFamily("c1"), BilliardFamily("c2")
        rng = random.Random(3)
        checked = 0
        while checked < 100:
            pt = ProjectivePoint.affine(
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            )
            try:
                v2 = eval_integral(c2, pt)
                v1 = eval_integral(c1, mc(pt))
            except Exception:
                continue
            if v1.is_inf or v2.is_inf:
                continue
            assert abs(-3 * v2.value - v1.value) <= 1e-9 * max(1.0, abs(v1.value))
            checked += 1

    def test_c_maps_base_points(self):
        mc = c_family_equivalence()
        sigma_c1 = indeterminacy_set(BilliardFamily("c1"))
        for bp in indeterminacy_set(BilliardFamily("c2")):
            img = mc(bp)
            assert any(img.eq(t) for t in sigma_c1)

    def test_c_inverse_identity(self):
        mc = c_family_equivalence()
        rng = random.Random(4)
        both = mc.compose(mc.inverse())
        for _ in range(10):
            pt = ProjectivePoint.affine(
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            )
            assert both(pt).eq(pt)


class TestOrder3Symmetries:
    def test_cubes_are_identity(self):
        s1, s2 = order3_symmetries()
        for s in (s1, s2):
            cube = s.compose(s).compose(s)
            assert cube.is_projective_identity(1e-12)

    def test_c1_symmetry_preserves_integral(self):
        s1, _ = order3_symmetries()
        c1 = BilliardFamily("c1")
        rng = random.Random(6)
        checked = 0
        while checked < 50:
            pt = ProjectivePoint.affine(
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            )
            try:
                a = eval_integral(c1, pt)
                b = eval_integral(c1, s1(pt))
            except Exception:
                continue
            if a.is_inf or b.is_inf:
                continue
            assert abs(a.value - b.value) <= 1e-9 * max(1.0, abs(a.value))
            checked += 1

    def test_c2_symmetry_permutes_base_points(self):
        _, s2 = order3_symmetries()
        origin = ProjectivePoint.affine(0.0, 0.0)
        one_one = ProjectivePoint.affine(1.0, 1.0)
        assert s2(origin).eq(E_INFINITY)
        assert s2(E_INFINITY).eq(one_one)
        assert s2(one_one).eq(origin)


class TestPhasePoint:
    def test_validate(self):
        p = conic_point(1.0)
        PhasePoint(ProjectivePoint.affine(0.0, -1.0), p).validate()
        with pytest.raises(ValueError):
            PhasePoint(ProjectivePoint.affine(0.0, 0.5), p).validate()
