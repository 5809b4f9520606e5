"""The degree-two Albanese map: values, monodromy, extension, MHS bookkeeping."""

import cmath
import math

import numpy as np
import pytest

from alblab.albanese import (E23_ACTION, E24_ACTION, albanese_point,
                             albanese_point_alt, check_lie_action, e23_to_e24,
                             extended_albanese, extended_albanese_class,
                             lie_action_is_mhs_morphism, monodromy_action,
                             raw_coordinates, regression_constants)
from alblab.hodge import boundary_chart_point, reduce_mod_integral
from alblab.integrals import TWO_PI_I
from alblab.paths import DomainError

LI2_HALF = math.pi ** 2 / 12 - math.log(2) ** 2 / 2


def li2_series(x: complex, terms: int = 300) -> complex:
    return sum(x ** n / n ** 2 for n in range(1, terms))


class TestAlbanesePoint:
    def test_half_values(self, cfg):
        p = albanese_point(0.5, cfg=cfg)
        expected_raw = (cmath.log(0.5) / TWO_PI_I, math.log(2) / TWO_PI_I,
                        LI2_HALF / TWO_PI_I ** 2)
        reduced, _ = reduce_mod_integral(*expected_raw)
        assert max(abs(a - b) for a, b in zip(p.coords, reduced)) < 1e-8

    def test_homotopy_classes_agree(self, cfg):
        x = 0.4 + 0.3j
        base = albanese_point(x, cfg=cfg)
        for prefix in ("0", "1", "0 1^-1"):
            other = albanese_point(x, homotopy_class=prefix, cfg=cfg)
            assert base.distance(other) < 1e-8

    def test_raw_coordinates_differ_by_integers(self, cfg):
        x = 0.4 + 0.3j
        plain = raw_coordinates(x, cfg)
        looped = raw_coordinates(x, cfg, loop_prefix="0")
        assert abs((looped[0] - plain[0]) - 1) < 1e-9
        assert abs(looped[1] - plain[1]) < 1e-9

    def test_small_x_behavior(self, cfg):
        x = 1e-3
        alpha, beta, lam = raw_coordinates(x, cfg)
        # alpha = log(x)/(2 pi i) has large positive imaginary part
        assert alpha.imag > 1.0
        assert abs(alpha.imag - (-math.log(x) / (2 * math.pi))) < 1e-9
        assert abs(beta) < 2e-3 and abs(lam) < 2e-3

    def test_puncture_rejected(self, cfg):
        with pytest.raises(DomainError):
            albanese_point(0.0, cfg=cfg)

    def test_junction_point_target(self, cfg):
        # the standard path degenerates to a constant tail there
        p = albanese_point(0.125, cfg=cfg)
        assert abs(p.alpha - cmath.log(0.125) / TWO_PI_I) < 1e-9

    def test_reduced_class_continuous_across_argument_cut(self, cfg):
        # the canonical-path convention flips across the negative real axis,
        # but the flip is by an integer matrix, so reduced classes agree
        above = albanese_point(-0.5 + 1e-9j, cfg=cfg)
        below = albanese_point(-0.5 - 1e-9j, cfg=cfg)
        assert above.distance(below) < 1e-7


class TestAlternativeForm:
    def test_frozen_comparison_rule(self, cfg, rng):
        frozen = regression_constants()["e23_to_e24"]["rule"]
        assert "alpha' = beta" in frozen
        checked = 0
        while checked < 20:
            x = complex(rng.uniform(0.15, 0.85), rng.uniform(-0.6, 0.6))
            if abs(x) < 0.05 or abs(x - 1) < 0.05:
                continue
            raw = raw_coordinates(x, cfg)
            predicted, _ = reduce_mod_integral(*e23_to_e24(raw))
            alt = albanese_point_alt(x, cfg=cfg)
            assert max(abs(a - b) for a, b in zip(alt.coords, predicted)) < 1e-8
            checked += 1

    def test_alt_monodromy_stability(self, cfg):
        x = 0.35 + 0.2j
        base = albanese_point_alt(x, cfg=cfg)
        looped = albanese_point_alt(x, homotopy_class="1", cfg=cfg)
        assert base.distance(looped) < 1e-8


class TestMonodromyAction:
    def test_empty_word(self, cfg):
        g = monodromy_action("", cfg)
        assert (g == np.eye(3, dtype=int)).all()

    def test_generators_match_frozen(self, cfg):
        frozen = regression_constants()["monodromy_matrices"]
        assert monodromy_action("0", cfg).tolist() == frozen["gamma0"]
        assert monodromy_action("1", cfg).tolist() == frozen["gamma1"]

    def test_commutator_is_central_shift(self, cfg):
        g = monodromy_action("0 1 0^-1 1^-1", cfg)
        assert g[1][2] == 0 and g[0][1] == 0
        assert abs(g[0][2]) == 1

    def test_homomorphy(self, cfg):
        g0 = monodromy_action("0", cfg)
        g1 = monodromy_action("1", cfg)
        g01 = monodromy_action("0 1", cfg)
        assert (g01 == g0 @ g1).all()
        g101 = monodromy_action("1 0 1^-1", cfg)
        assert (g101 == g1 @ g0 @ np.linalg.inv(g1).astype(int)).all()

    def test_heisenberg_generation(self, cfg):
        g0 = monodromy_action("0", cfg)
        g1 = monodromy_action("1", cfg)
        ab = np.array([[g0[1][2], g1[1][2]], [g0[0][1], g1[0][1]]])
        assert abs(round(np.linalg.det(ab))) == 1  # abelianization generates Z^2
        comm = monodromy_action("0 1 0^-1 1^-1", cfg)
        assert abs(comm[0][2]) == 1                # commutator generates the center


class TestExtendedMap:
    def test_at_zero(self, cfg):
        assert extended_albanese(0, cfg) == (0, 0, 0)

    def test_series_oracle_at_tenth(self, cfg):
        q, beta, lam = extended_albanese(0.1, cfg)
        assert q == 0.1
        l1 = -cmath.log(1 - 0.1)
        assert abs(beta - l1 / TWO_PI_I) < 1e-8
        assert abs(lam - li2_series(0.1) / TWO_PI_I ** 2) < 1e-8

    def test_chart_consistency(self, cfg):
        for x in (0.1, 0.05, 0.2j, -0.15 + 0.1j):
            q, beta, lam = extended_albanese(x, cfg)
            chart = boundary_chart_point(q, beta, lam)
            direct = albanese_point(x, cfg=cfg)
            assert max(abs(a - b) for a, b in zip(chart.coords, direct.coords)) < 1e-8

    def test_outside_disk_rejected(self, cfg):
        with pytest.raises(DomainError):
            extended_albanese(0.75, cfg)

    def test_radial_continuity_at_zero(self, cfg):
        for k in range(10):
            direction = cmath.exp(2j * math.pi * k / 10)
            x = 0.01 * direction
            q, beta, lam = extended_albanese(x, cfg)
            assert abs(beta) <= 2 * abs(x)
            assert abs(lam) <= 2 * abs(x)

    def test_orbit_class_at_zero(self, cfg):
        cc = extended_albanese_class(0, cfg)
        assert cc.kind == "orbit"
        assert (cc.orbit_generator.a, cc.orbit_generator.b, cc.orbit_generator.c) == (1, 0, 0)
        assert abs(cc.orbit_lambda) == 0


class TestPathIndependence:
    def test_reduced_class_fixed_under_loops(self, cfg, rng):
        xs = [0.3, 0.6 + 0.4j, -0.2 + 0.25j, 1.4 + 0.5j, 0.5 - 0.35j, 0.07]
        words = ["0", "1", "0 1", "1^-1 0 1", "0 0 1^-1", "1 0 1 0^-1"]
        for x in xs:
            base = albanese_point(x, cfg=cfg)
            for word in words:
                moved = albanese_point(x, homotopy_class=word, cfg=cfg)
                assert base.distance(moved) < 1e-8, (x, word)


class TestMHSMorphism:
    def test_both_tables_pass(self):
        report = lie_action_is_mhs_morphism()
        assert report["E23"]["passes"] and report["E24"]["passes"]

    def test_tables_are_the_expected_maps(self):
        n0 = np.array(E23_ACTION["N0"])
        e3 = np.array([0, 0, 1])
        assert (n0 @ e3 == np.array([0, 1, 0])).all()   # e3 -> e2
        n1 = np.array(E24_ACTION["N1"])
        assert (n1 @ e3 == np.array([0, 1, 0])).all()

    def test_perturbed_action_detected(self):
        perturbed = {"N0": [[0, 0, 1], [0, 0, 1], [0, 0, 0]], "N1": E23_ACTION["N1"]}
        report = check_lie_action(perturbed)
        assert report["N0"]["weight_compatible"]        # image stays in low weights
        assert not report["N0"]["type_compatible"]      # but mixes Hodge types
        assert not report["passes"]

    def test_weight_violation_detected(self):
        bad = {"N0": [[0, 0, 0], [0, 0, 0], [0, 1, 0]], "N1": E23_ACTION["N1"]}
        assert not check_lie_action(bad)["N0"]["weight_compatible"]


class TestDifferentialRelations:
    def test_finite_differences(self, cfg):
        h = 1e-4
        for x in (0.45 + 0.3j, 0.3 - 0.25j):
            a0, b0, l0 = raw_coordinates(x, cfg)
            ap, bp, lp = raw_coordinates(x + h, cfg)
            am, bm, lm = raw_coordinates(x - h, cfg)
            dalpha, dbeta, dlam = (ap - am) / 2, (bp - bm) / 2, (lp - lm) / 2
            assert abs(dalpha - h / x / TWO_PI_I) < 1e-6
            assert abs(dbeta - h / (1 - x) / TWO_PI_I) < 1e-6
            assert abs(dlam - b0 * dalpha) < 1e-6
