import cmath
import math

import pytest

from chebsys.algebraic import star_geometry
from chebsys.exactpoly import Poly
from chebsys.recurrence import Params, gen_type1_records
from chebsys.rootfind import residual_scale
from chebsys.roots import (
    attraction_study,
    conjecture_probe,
    distance_to_star,
    roots_of_h,
    roots_of_t,
)


def P(*coeffs):
    return Poly(coeffs)


class TestRootsOfH:
    def test_linear(self):
        pairs = roots_of_h(P(1, 1), 80)
        assert len(pairs) == 1
        root, mult = pairs[0]
        assert abs(complex(root) + 1) < 1e-12 and mult == 1

    def test_constant_has_no_roots(self):
        assert roots_of_h(P(5), 80) == []

    def test_quadratic(self):
        pairs = roots_of_h(P(-1, 0, 1), 80)
        values = sorted(complex(root).real for root, _ in pairs)
        assert abs(values[0] + 1) < 1e-12 and abs(values[1] - 1) < 1e-12

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            roots_of_h(Poly(), 80)

    def test_repeated_root_multiplicity(self):
        # (y - 1)^2 clusters into one double root
        pairs = roots_of_h(P(1, -2, 1), 80)
        assert sum(mult for _, mult in pairs) == 2
        assert len(pairs) == 1 and pairs[0][1] == 2


class TestRootsOfT:
    def test_linear_term_has_only_origin(self):
        p = Params(2, "1")
        rec = gen_type1_records(p, 5)[5]  # t_5 = -2z
        report = roots_of_t(rec, p, 128)
        assert report.t_roots == ((0j, 1),)
        assert report.origin_multiplicity == 1

    def test_constant_term_has_no_roots(self):
        p = Params(2, "1")
        rec = gen_type1_records(p, 0)[0]
        report = roots_of_t(rec, p, 128)
        assert report.t_roots == () and report.total_root_count == 0

    def test_cube_roots_of_minus_one(self):
        p = Params(2, "1")
        rec = gen_type1_records(p, 6)[6]  # t_6 = z^3 + 1
        report = roots_of_t(rec, p, 128)
        got = sorted(
            (complex(z) for z, _ in report.t_roots),
            key=lambda w: math.atan2(w.imag, w.real),
        )
        expected = sorted(
            (
                complex(-1),
                cmath.exp(1j * math.pi / 3),
                cmath.exp(-1j * math.pi / 3),
            ),
            key=lambda w: math.atan2(w.imag, w.real),
        )
        for a, b in zip(got, expected):
            assert abs(a - b) < 1e-10

    def test_counts_and_orbits(self):
        p = Params(2, "1")
        rot = cmath.exp(2j * math.pi / 3)
        for rec in gen_type1_records(p, 45):
            if rec.t.is_zero or rec.t.degree == 0:
                continue
            report = roots_of_t(rec, p, 128)
            assert report.total_root_count == rec.d - rec.k
            nonzero = [z for z, _ in report.t_roots if z != 0]
            for z in nonzero:
                rotated = z * rot
                assert any(
                    abs(rotated - w) <= 1e-8 * max(1, abs(w)) for w in nonzero
                ), rec.r
            assert report.total_root_count == rec.ell + (p.m + 1) * rec.h.degree

    def test_residuals_against_exact_coefficients(self):
        p = Params(2, "1")
        for r in (60, 90):
            rec = gen_type1_records(p, 90)[r]
            report = roots_of_t(rec, p, 128)
            for z, _ in report.t_roots:
                value = rec.t.eval_complex(z, 128)
                scale = max(
                    float(residual_scale(rec.t.coeffs, z)),
                    float(residual_scale(rec.t.coeffs, 1)),
                )
                assert abs(value) <= 1e-8 * scale


class TestStarDistance:
    def test_point_on_ray_is_zero(self):
        geom = star_geometry(Params(2, "1"))
        assert distance_to_star(cmath.exp(1j * math.pi / 3), geom) < 1e-15

    def test_unit_point_against_even_rays(self):
        geom = star_geometry(Params(2, "1"))
        assert abs(distance_to_star(1.0, geom) - math.sin(math.pi / 3)) < 1e-12

    def test_origin(self):
        geom = star_geometry(Params(4, "2"))
        assert distance_to_star(0, geom) == 0

    def test_m1_star_is_real_axis(self):
        geom = star_geometry(Params(1, "1"))
        assert distance_to_star(-3.7, geom) < 1e-15
        assert abs(distance_to_star(2 + 1j, geom) - 1) < 1e-12


class TestAttraction:
    def test_m2_roots_sit_on_star(self):
        study = attraction_study(Params(2, "1"), [30, 60, 90], 128)
        assert study.verdict_max == "non-increasing"
        for row in study.rows:
            assert row.max_distance < 1e-8

    def test_vacuous_entry(self):
        study = attraction_study(Params(2, "1"), [0], 80)
        assert study.rows[0].root_count == 0
        assert study.verdict_max == "vacuous"

    def test_m1_roots_near_real_axis(self):
        study = attraction_study(Params(1, "1"), [20, 40], 128)
        for row in study.rows:
            assert row.max_distance < 1e-9

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            attraction_study(Params(1, "1"), [10, 5])


class TestConjectureProbe:
    def test_m1_classical_case_passes(self):
        report = conjecture_probe(Params(1, "1"), 40, 80)
        assert report.classification == "PASS"
        assert report.max_imag_normalized <= 1e-9

    def test_vacuous_range_passes(self):
        report = conjecture_probe(Params(3, "1"), 3, 80)
        assert report.classification == "PASS"
        assert report.checked == 0

    def test_m2_emits_classification(self):
        report = conjecture_probe(Params(2, "1"), 60, 80)
        assert report.classification in {"PASS", "INCONCLUSIVE", "COUNTEREXAMPLE"}
        assert report.checked > 0

    def test_requires_r_max_at_least_m(self):
        with pytest.raises(ValueError):
            conjecture_probe(Params(3, "1"), 2, 80)

    def test_all_real_roots_imply_star_rays(self):
        # with real h-roots every nonzero root argument is a multiple of
        # pi/(m+1); positive roots map to even multiples, negative to odd
        p = Params(2, "1")
        probe = conjecture_probe(p, 45, 80)
        if probe.classification != "PASS":
            pytest.skip("probe did not certify real roots on this range")
        for rec in gen_type1_records(p, 45):
            if rec.t.is_zero or rec.t.degree == 0:
                continue
            for z, _ in roots_of_t(rec, p, 128).t_roots:
                if z == 0:
                    continue
                angle = math.atan2(z.imag, z.real) % (2 * math.pi)
                steps = angle / (math.pi / 3)
                assert abs(steps - round(steps)) < 1e-8
