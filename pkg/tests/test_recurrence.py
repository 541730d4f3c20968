import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebsys.exactpoly import Poly, compose_star
from chebsys.rationals import as_rational
from chebsys.recurrence import (
    FactorizationViolation,
    Params,
    decompose_index,
    extract_h,
    gen_type1_records,
    gen_type1_scalar,
    gen_type1_vectors,
    gen_type2,
    verify_h_recurrence,
    verify_shift,
)


def P(*coeffs):
    return Poly(coeffs)


def test_params_validation():
    with pytest.raises(ValueError):
        Params(0, "1")
    with pytest.raises(ValueError):
        Params(2, "-1/2")
    with pytest.raises(ValueError):
        Params(2, "0")
    p = Params(3, "3/2")
    assert p.c == as_rational("3/2")


class TestScalarGenerator:
    def test_m2_values(self):
        ts = gen_type1_scalar(Params(2, "1"), 6)
        assert ts[0] == P(1)
        assert ts[1] == Poly()
        assert ts[2] == P(0, 1)
        assert ts[5] == P(0, -2)
        assert ts[6] == P(1, 0, 0, 1)

    def test_scaling_with_c(self):
        ts = gen_type1_scalar(Params(2, "3/2"), 5)
        assert ts[2] == P(0, "2/3")
        assert ts[5] == P(0, "-8/9")  # -2 z / c^2

    def test_zero_pattern_matches_tau(self):
        # the vanishing indices are exactly those with tau = -1; for m >= 3
        # they extend beyond 1..m-1 (e.g. r = 5 when m = 3)
        for m in (2, 3, 5):
            ts = gen_type1_scalar(Params(m, "1"), 40)
            for r, t in enumerate(ts):
                tau = decompose_index(r, m)[2]
                assert t.is_zero == (tau == -1), (m, r)

    def test_m3_has_zero_beyond_initial_block(self):
        ts = gen_type1_scalar(Params(3, "1"), 6)
        assert ts[5].is_zero
        assert decompose_index(5, 3) == (1, 2, -1, 3)


class TestVectorGenerator:
    def test_initial_unit_vectors(self):
        recs = gen_type1_vectors(Params(2, "1"), 3)
        assert recs[0].components == (P(1), Poly())
        assert recs[1].components == (Poly(), P(1))

    def test_one_step(self):
        recs = gen_type1_vectors(Params(2, "1"), 3)
        assert recs[2].components == (P(0, 1), Poly())
        assert recs[3].components == (P(-1), P(0, 1))

    def test_first_component_agrees_with_scalar(self):
        for m, c in ((1, "1"), (2, "3/2"), (3, "1/2")):
            p = Params(m, c)
            scalars = gen_type1_scalar(p, 25)
            vectors = gen_type1_vectors(p, 25)
            assert [rec.components[0] for rec in vectors] == scalars


class TestType2Generator:
    def test_monomial_head(self):
        ts = gen_type2(Params(2, "1"), 3)
        assert ts[2] == P(0, 0, 1)
        assert ts[3] == P(-1, 0, 0, 1)

    def test_m1_matches_monic_second_kind(self):
        ts = gen_type2(Params(1, "1"), 2)
        assert ts[2] == P(-1, 0, 1)

    def test_recurrence_holds(self):
        p = Params(3, "1/2")
        ts = gen_type2(p, 20)
        x = Poly((0, 1))
        for n in range(0, 19):
            prev = ts[n - p.m] if n - p.m >= 0 else Poly()
            assert ts[n + 1] == x * ts[n] - p.c * prev


class TestDecomposeIndex:
    @pytest.mark.parametrize(
        "r,m,expected",
        [
            (0, 2, (0, 0, 0, 0)),
            (5, 2, (2, 1, 0, 1)),
            (1, 2, (0, 1, -1, 2)),
        ],
    )
    def test_examples(self, r, m, expected):
        assert decompose_index(r, m) == expected

    @given(st.integers(0, 10**6), st.integers(1, 50))
    @settings(max_examples=120)
    def test_round_trip(self, r, m):
        d, k, tau, ell = decompose_index(r, m)
        assert r == d * m + k
        assert 0 <= k <= m - 1
        assert d - k == (m + 1) * tau + ell
        assert 0 <= ell <= m
        assert tau >= -1


class TestExtractH:
    def test_cubic_plus_one(self):
        assert extract_h(P(1, 0, 0, 1), 6, 2) == P(1, 1)

    def test_negated_constant(self):
        assert extract_h(P(-1), 3, 2) == P(1)

    def test_initial_one(self):
        assert extract_h(P(1), 0, 2) == P(1)

    def test_zero_term(self):
        assert extract_h(Poly(), 1, 2) == Poly()

    def test_support_violation_raises(self):
        # r=6, m=2 demands support in residue class 0 mod 3
        with pytest.raises(FactorizationViolation):
            extract_h(P(1, 1), 6, 2)

    def test_nonzero_where_tau_negative_raises(self):
        with pytest.raises(FactorizationViolation):
            extract_h(P(1), 1, 2)

    def test_round_trip_everywhere(self):
        for m, c in ((1, "1"), (2, "1/2"), (4, "3")):
            p = Params(m, c)
            for rec in gen_type1_records(p, 50):
                assert compose_star(rec.h, m, rec.k, rec.ell) == rec.t
                if rec.tau >= 0:
                    assert rec.h.degree == rec.tau
                    assert rec.t.degree == rec.d - rec.k


class TestShiftIdentity:
    def test_m2(self):
        report = verify_shift(gen_type1_vectors(Params(2, "1"), 10))
        assert report.all_pass and report.checked == 10

    def test_m1_vacuous(self):
        report = verify_shift(gen_type1_vectors(Params(1, "1"), 10))
        assert report.all_pass and report.checked == 0

    def test_m3(self):
        report = verify_shift(gen_type1_vectors(Params(3, "2/3"), 30))
        assert report.all_pass and report.checked == 60


class TestHRecurrenceSigns:
    def test_m2_r6_plus_variant(self):
        p = Params(2, "1")
        hs = [rec.h for rec in gen_type1_records(p, 8)]
        report = verify_h_recurrence(hs, p)
        row6 = next(row for row in report.rows if row.r == 6)
        assert 1 in row6.signs
        row8 = next(row for row in report.rows if row.r == 8)
        assert row8.signs  # some variant holds exactly

    def test_m1_r2_variant(self):
        p = Params(1, "1")
        hs = [rec.h for rec in gen_type1_records(p, 4)]
        report = verify_h_recurrence(hs, p)
        row2 = next(row for row in report.rows if row.r == 2)
        assert row2.signs == (-1,)

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_k_parity_rule_matches_data(self, m):
        # non-degenerate rows pin the sign to (-1)^m for k=0 and +1 otherwise,
        # while the ell-based variant fails whenever the two rules disagree
        p = Params(m, "1")
        hs = [rec.h for rec in gen_type1_records(p, 60)]
        report = verify_h_recurrence(hs, p)
        assert report.k_parity_rule_holds
        expected_k0 = ((-1) ** m,)
        for label, signs in report.empirical_table.items():
            if label.startswith("k0"):
                assert signs == expected_k0
            else:
                assert signs == (1,)
        if m % 2 == 0:
            assert not report.ell_parity_rule_holds


class TestStructuralProperties:
    def test_leading_coefficient_scaled_by_c_power_is_integer(self):
        for m, c in ((2, "3/2"), (3, "3/2"), (1, "5/7")):
            p = Params(m, c)
            for rec in gen_type1_records(p, 60):
                if rec.tau < 0:
                    continue
                scaled = abs(rec.t.leading) * p.c**rec.d
                assert scaled.denominator == 1 and scaled > 0, (m, c, rec.r)

    def test_m1_reduction_to_second_kind(self):
        # q_n = c^(n/2) t_n(2 sqrt(c) u) satisfies the second-kind recurrence
        rng = random.Random(20240917)
        for c_str, c_val in (("1", 1.0), ("4", 4.0)):
            p = Params(1, c_str)
            ts = gen_type1_scalar(p, 25)
            for _ in range(20):
                u = rng.uniform(-0.999, 0.999)
                second_kind = [1.0, 2 * u]
                for _ in range(2, 26):
                    second_kind.append(2 * u * second_kind[-1] - second_kind[-2])
                for n in (3, 11, 25):
                    val = complex(
                        ts[n].eval_complex(2 * math.sqrt(c_val) * u, 128)
                    ) * c_val ** (n / 2)
                    assert abs(val.real - second_kind[n]) <= 1e-9 * max(
                        1, abs(second_kind[n])
                    )
                    assert abs(val.imag) <= 1e-12
