"""Period-domain machinery: flags, the orbit criterion, monodromy filtrations, the chart."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alblab import linalg
from alblab.acceptance import rmf_brute_force
from alblab.hodge import (LAMBDA, NilpotentEndo,
                          WeightFiltrationGeneric, boundary_chart_point,
                          coordinate_action, generates_nilpotent_orbit,
                          griffiths_transversal, hodge_filtration_from,
                          pure_monodromy_filtration, reduce_mod_integral,
                          relative_monodromy_filtration, unipotent_matrix,
                          verify_relative_monodromy)
from alblab.paths import DomainError

frac = st.fractions(min_value=-4, max_value=4, max_denominator=5)


class TestFiltration:
    def test_base_flag(self):
        f = hodge_filtration_from(Fraction(0), Fraction(0), Fraction(0))
        assert f.generators(0) == [[0, 0, 1]]
        assert f.generators(-1) == [[0, 0, 1], [0, 1, 0]]

    @given(frac, frac, frac, st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
    @settings(max_examples=50, deadline=None)
    def test_left_multiplication_action(self, alpha, beta, lam, a, b, c):
        g = unipotent_matrix(a, b, c)
        moved = coordinate_action(g, (alpha, beta, lam))
        f_moved = hodge_filtration_from(*moved)
        # matrix-product oracle: apply g to the generators of F(alpha,beta,lam)
        f = hodge_filtration_from(alpha, beta, lam)
        g_frac = [[Fraction(int(x)) for x in row] for row in g]
        for p in (0, -1):
            pushed = [linalg.matvec(g_frac, v) for v in f.generators(p)]
            target = f_moved.generators(p)
            assert linalg.span_equal(pushed, target)

    @given(frac, frac, frac)
    @settings(max_examples=100, deadline=None)
    def test_round_trip(self, alpha, beta, lam):
        f = hodge_filtration_from(alpha, beta, lam)
        assert f.coordinates() == (alpha, beta, lam)

    def test_round_trip_float(self, rng):
        for _ in range(100):
            coords = tuple(complex(rng.normal(), rng.normal()) for _ in range(3))
            f = hodge_filtration_from(*coords)
            back = f.coordinates()
            assert max(abs(a - b) for a, b in zip(coords, back)) < 1e-12


class TestTransversality:
    def test_zero_endo(self):
        f = hodge_filtration_from(Fraction(1, 2), Fraction(3), Fraction(-1))
        assert griffiths_transversal(NilpotentEndo(0, 0, 0), f)

    def test_a_only(self):
        # N = (1,0,0): transversal iff beta = 0
        f0 = hodge_filtration_from(Fraction(2), Fraction(0), Fraction(5))
        f1 = hodge_filtration_from(Fraction(2), Fraction(1, 3), Fraction(5))
        n = NilpotentEndo(1, 0, 0)
        assert griffiths_transversal(n, f0)
        assert not griffiths_transversal(n, f1)

    def test_paper_criterion_instance(self):
        # N = (1,1,c) with F(alpha,beta,lambda): true iff c = beta - alpha
        alpha, beta = Fraction(3, 2), Fraction(-2, 3)
        f = hodge_filtration_from(alpha, beta, Fraction(7))
        assert griffiths_transversal(NilpotentEndo(1, 1, beta - alpha), f)
        assert not griffiths_transversal(NilpotentEndo(1, 1, beta - alpha + 1), f)

    @given(frac, frac, frac, frac, frac, frac)
    @settings(max_examples=100, deadline=None)
    def test_criterion_equivalence(self, a, b, c, alpha, beta, lam):
        n = NilpotentEndo(a, b, c)
        f = hodge_filtration_from(alpha, beta, lam)
        assert griffiths_transversal(n, f) == (c == a * beta - b * alpha)

    def test_float_route(self):
        f = hodge_filtration_from(0.25, 0.5 + 0.1j, -0.7)
        n = NilpotentEndo(2, 0, 0)
        assert not griffiths_transversal(n, f)
        f0 = hodge_filtration_from(0.25, 0.0, -0.7)
        assert griffiths_transversal(n, f0)


class TestOrbitCriterion:
    def test_zero_endo_always(self):
        f = hodge_filtration_from(0.3 + 1j, -2.0, 0.9j)
        assert generates_nilpotent_orbit(NilpotentEndo(0, 0, 0), f).generates

    def test_paper_specialization(self):
        n = NilpotentEndo(1, 0, 0)
        assert generates_nilpotent_orbit(n, hodge_filtration_from(
            Fraction(4), Fraction(0), Fraction(1))).generates
        assert not generates_nilpotent_orbit(n, hodge_filtration_from(
            Fraction(4), Fraction(1), Fraction(1))).generates

    def test_admissibility_always_on_lambda(self, rng):
        for _ in range(20):
            n = NilpotentEndo(*(Fraction(int(rng.integers(-3, 4))) for _ in range(3)))
            f = hodge_filtration_from(*(Fraction(int(rng.integers(-3, 4))) for _ in range(3)))
            assert generates_nilpotent_orbit(n, f).admissible


class TestPureMonodromy:
    def test_zero_matrix(self):
        mat = [[Fraction(0)] * 2 for _ in range(2)]
        filt = pure_monodromy_filtration(mat, 5)
        assert linalg.span_basis(filt[5]) == [[1, 0], [0, 1]]
        assert filt[4] == []

    def test_jordan_block(self):
        mat = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
        w = WeightFiltrationGeneric.from_dict({3: [[1, 0], [0, 1]]}, 2)
        m = relative_monodromy_filtration(mat, w)
        assert m.jumps == [2, 4]
        assert verify_relative_monodromy(mat, w, m)
        assert rmf_brute_force(mat, w) == [m]


class TestRelativeMonodromy:
    def test_zero_endo_gives_w(self):
        m = relative_monodromy_filtration(NilpotentEndo(0, 0, 0), LAMBDA.weights)
        assert m == LAMBDA.weights

    def test_lambda_example(self):
        n = NilpotentEndo(1, 0, 0)
        m = relative_monodromy_filtration(n, LAMBDA.weights)
        assert m is not None
        assert verify_relative_monodromy(n, LAMBDA.weights, m)
        search = rmf_brute_force(n.matrix(), LAMBDA.weights)
        assert search == [m]

    def test_non_existence(self):
        mat = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
        w = WeightFiltrationGeneric.from_dict({-1: [[1, 0]], 0: [[1, 0], [0, 1]]}, 2)
        assert relative_monodromy_filtration(mat, w) is None
        assert rmf_brute_force(mat, w) == []

    def test_shift_two_exists(self):
        mat = [[Fraction(0), Fraction(1)], [Fraction(0), Fraction(0)]]
        w = WeightFiltrationGeneric.from_dict({-2: [[1, 0]], 0: [[1, 0], [0, 1]]}, 2)
        m = relative_monodromy_filtration(mat, w)
        assert m is not None and verify_relative_monodromy(mat, w, m)

    def test_non_nilpotent_rejected(self):
        mat = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        w = WeightFiltrationGeneric.from_dict({0: [[1, 0], [0, 1]]}, 2)
        with pytest.raises(DomainError):
            relative_monodromy_filtration(mat, w)

    def test_w_preservation_required(self):
        # N maps e1 (low weight) out to e2 (high weight)
        mat = [[Fraction(0), Fraction(0)], [Fraction(1), Fraction(0)]]
        w = WeightFiltrationGeneric.from_dict({-2: [[1, 0]], 0: [[1, 0], [0, 1]]}, 2)
        with pytest.raises(DomainError):
            relative_monodromy_filtration(mat, w)

    def test_randomized_against_search(self, rng):
        from alblab.acceptance import _random_rmf_instance
        for _ in range(40):
            mat, w = _random_rmf_instance(rng)
            ours = relative_monodromy_filtration(mat, w)
            found = rmf_brute_force(mat, w)
            if ours is None:
                assert found == []
            else:
                assert verify_relative_monodromy(mat, w, ours)
                assert found == [ours]


class TestReduce:
    def test_identity(self):
        reduced, g = reduce_mod_integral(0.0, 0.0, 0.0)
        assert reduced == (0, 0, 0)
        assert (np.array(g, dtype=float) == np.eye(3)).all()

    def test_worked_example(self):
        reduced, g = reduce_mod_integral(1.5, -0.25 + 1j, 2 + 0.5j)
        assert reduced == (0.5, 0.75 + 1j, 0.5 + 0.5j)
        a, b, c = g[1][2], g[0][1], g[0][2]
        assert (a, b, c) == (-1, 1, -3)

    def test_idempotent(self, rng):
        for _ in range(50):
            coords = tuple(complex(rng.normal() * 3, rng.normal()) for _ in range(3))
            reduced, _ = reduce_mod_integral(*coords)
            again, g = reduce_mod_integral(*reduced)
            assert again == reduced
            assert (np.array(g, dtype=float) == np.eye(3)).all()

    def test_orbit_invariance(self, rng):
        for _ in range(100):
            coords = tuple(complex(rng.normal() * 2, rng.normal()) for _ in range(3))
            g = unipotent_matrix(*(int(x) for x in rng.integers(-5, 6, size=3)))
            moved = coordinate_action(g, coords)
            r1, _ = reduce_mod_integral(*coords)
            r2, _ = reduce_mod_integral(*moved)
            assert max(abs(a - b) for a, b in zip(r1, r2)) < 1e-12

    def test_exact_inputs_stay_exact(self):
        reduced, _ = reduce_mod_integral(Fraction(7, 2), Fraction(-1, 4), Fraction(9))
        assert all(isinstance(x, Fraction) for x in reduced)
        # lambda' = 9 + 1*(7/2) - 12 = 1/2
        assert reduced == (Fraction(1, 2), Fraction(3, 4), Fraction(1, 2))

    @given(frac, frac, frac, st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
    @settings(max_examples=80, deadline=None)
    def test_exact_orbit_invariance(self, alpha, beta, lam, a, b, c):
        g = unipotent_matrix(a, b, c)
        moved = coordinate_action(g, (alpha, beta, lam))
        r1, _ = reduce_mod_integral(alpha, beta, lam)
        r2, _ = reduce_mod_integral(*moved)
        assert r1 == r2


class TestBoundaryChart:
    def test_interior_alpha_zero_branch(self):
        cc = boundary_chart_point(1.0, 0.3, 0.7j)
        assert cc.kind == "interior"
        assert max(abs(a - b) for a, b in zip(cc.coords, (0.0, 0.3, 0.7j))) < 1e-12

    def test_branch_independence(self):
        alpha = 0.37 + 0.6j
        q = cmath.exp(2j * math.pi * alpha)
        cc1 = boundary_chart_point(q, 0.2, 0.5)
        shifted = cmath.exp(2j * math.pi * (alpha + 1))
        cc2 = boundary_chart_point(shifted, 0.2, 0.5)
        assert max(abs(a - b) for a, b in zip(cc1.coords, cc2.coords)) < 1e-9

    def test_orbit_point(self):
        cc = boundary_chart_point(0, 0, 0.25)
        assert cc.kind == "orbit"
        assert (cc.orbit_generator.a, cc.orbit_generator.b, cc.orbit_generator.c) == (1, 0, 0)
        assert abs(cc.orbit_lambda - 0.25) < 1e-12

    def test_invariant_violation(self):
        with pytest.raises(DomainError):
            boundary_chart_point(0, 0.1, 0.0)

    def test_vertical_line_converges_to_orbit(self):
        # q = exp(2 pi i (theta + i t)): modulus decreases monotonically in t,
        # the reduced real part stays fixed, and the chart point tends to (0,0,l)
        theta, lam = 0.3, 0.45
        prev_mod = None
        for t in (0.5, 1.0, 2.0, 4.0):
            q = cmath.exp(2j * math.pi * complex(theta, t))
            cc = boundary_chart_point(q, 0.0, lam)
            assert cc.kind == "interior"
            assert abs(cc.coords[0].real - theta) < 1e-12
            if prev_mod is not None:
                assert abs(q) < prev_mod
            prev_mod = abs(q)
        limit = boundary_chart_point(0, 0, lam)
        assert limit.kind == "orbit"
        assert abs(limit.orbit_lambda - lam) < 1e-12


class TestWeightFiltrationType:
    def test_nested_required(self):
        with pytest.raises(DomainError):
            WeightFiltrationGeneric.from_dict({0: [[1, 0]], 1: [[0, 1]]}, 2)

    def test_exhaustive_required(self):
        with pytest.raises(DomainError):
            WeightFiltrationGeneric.from_dict({0: [[1, 0]]}, 2)

    def test_graded_dims(self):
        w = LAMBDA.weights
        assert [w.graded_dim(j) for j in (-4, -3, -2, -1, 0)] == [1, 0, 1, 0, 1]
