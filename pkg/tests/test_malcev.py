"""Exact truncated group-ring algebra: exp/log, coproduct classes, BCH, Hall bases."""

from fractions import Fraction

import pytest

from alblab.malcev import (ExactSeries, GroupWord, bch, classify_coproduct,
                           exp_trunc, group_log, hall_basis, hall_coordinates,
                           hall_dims, is_grouplike, is_primitive, log_trunc,
                           lyndon_words, malcev_coordinates,
                           primitive_space_dimension)

def random_series(rng, level, max_len=None):
    from alblab.words import word_basis
    max_len = max_len or level
    coeffs = {}
    for w in word_basis(level):
        if 0 < len(w) <= max_len and rng.random() < 0.6:
            coeffs[w] = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5)))
    return ExactSeries(level, coeffs)


class TestExpLog:
    def test_exp_zero(self):
        z = ExactSeries(3, {})
        assert exp_trunc(z).coeffs == {"": Fraction(1)}

    def test_exp_letter_level2(self):
        e0 = ExactSeries.letter("0", 2)
        out = exp_trunc(e0)
        assert out.coeffs == {"": Fraction(1), "0": Fraction(1), "00": Fraction(1, 2)}

    def test_log_unit(self):
        assert log_trunc(ExactSeries.unit(3)).coeffs == {}

    def test_log_of_one_plus_letter(self):
        g = ExactSeries(2, {"": Fraction(1), "0": Fraction(1)})
        assert log_trunc(g).coeffs == {"0": Fraction(1), "00": Fraction(-1, 2)}

    def test_round_trip_random(self, rng):
        for _ in range(20):
            level = int(rng.integers(1, 5))
            h = random_series(rng, level)
            assert log_trunc(exp_trunc(h)).coeffs == h.coeffs

    def test_exp_rejects_constant_term(self):
        with pytest.raises(ValueError):
            exp_trunc(ExactSeries.unit(2))

    def test_log_rejects_wrong_constant(self):
        with pytest.raises(ValueError):
            log_trunc(ExactSeries(2, {"0": Fraction(1)}))


class TestClassification:
    def test_letter_is_primitive(self):
        assert classify_coproduct(ExactSeries.letter("0", 3)) == "primitive"

    def test_bracket_is_primitive(self):
        e0 = ExactSeries.letter("0", 2)
        e1 = ExactSeries.letter("1", 2)
        assert classify_coproduct(e0.bracket(e1)) == "primitive"

    def test_exp_of_primitive_is_grouplike(self):
        e = ExactSeries.letter("0", 3).add(ExactSeries.letter("1", 3))
        assert classify_coproduct(exp_trunc(e)) == "grouplike"

    def test_neither(self):
        h = ExactSeries(2, {"": Fraction(1), "01": Fraction(1)})
        assert classify_coproduct(h) == "neither"

    def test_grouplike_exp_random(self, rng):
        for _ in range(30):
            level = int(rng.integers(1, 5))
            coeffs = {}
            for w, c in hall_coords_sample(rng, level).items():
                coeffs[w] = c
            h = lie_element(coeffs, level)
            assert is_primitive(h)
            assert is_grouplike(exp_trunc(h))
            assert is_primitive(log_trunc(exp_trunc(h)))


def hall_coords_sample(rng, level):
    out = {}
    for d in range(1, level + 1):
        for w in lyndon_words(d):
            if rng.random() < 0.5:
                out[w] = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
    return out


def lie_element(coords, level):
    from alblab.malcev import bracket_expansion
    coeffs: dict = {}
    for w, c in coords.items():
        for tw, m in bracket_expansion(w):
            coeffs[tw] = coeffs.get(tw, Fraction(0)) + c * m
    return ExactSeries(level, coeffs)


class TestBCH:
    def test_identity_element(self):
        a = ExactSeries.letter("0", 3)
        zero = ExactSeries(3, {})
        assert bch(a, zero).coeffs == a.coeffs

    def test_class_two(self):
        e0 = ExactSeries.letter("0", 2)
        e1 = ExactSeries.letter("1", 2)
        expected = e0.add(e1).add(e0.bracket(e1).scale(Fraction(1, 2)))
        assert bch(e0, e1).coeffs == expected.coeffs

    def test_class_three_coefficient(self):
        e0 = ExactSeries.letter("0", 3)
        e1 = ExactSeries.letter("1", 3)
        coords = hall_coordinates(bch(e0, e1))
        assert coords["001"] == Fraction(1, 12)

    def test_result_primitive(self, rng):
        for _ in range(10):
            level = int(rng.integers(2, 5))
            a = lie_element(hall_coords_sample(rng, level), level)
            b = lie_element(hall_coords_sample(rng, level), level)
            assert is_primitive(bch(a, b))

    def test_associative(self, rng):
        for level in (2, 3, 4):
            a = lie_element(hall_coords_sample(rng, level), level)
            b = lie_element(hall_coords_sample(rng, level), level)
            c = lie_element(hall_coords_sample(rng, level), level)
            assert bch(bch(a, b), c).coeffs == bch(a, bch(b, c)).coeffs

    def test_rejects_non_primitive(self):
        bad = ExactSeries(2, {"01": Fraction(1)})
        with pytest.raises(ValueError):
            bch(bad, ExactSeries.letter("0", 2))


class TestHall:
    def test_dims_r1(self):
        assert hall_dims(1) == [2]

    def test_dims_r2(self):
        assert hall_dims(2) == [2, 1]
        assert sum(hall_dims(2)) == 3

    def test_dims_r4(self):
        assert hall_dims(4) == [2, 1, 2, 3]

    def test_necklace_counting(self):
        # number of Lyndon words of length n over two letters
        def necklace(n):
            total = 0
            for d in range(1, n + 1):
                if n % d == 0:
                    total += _mobius(n // d) * 2 ** d
            return total // n
        for n in range(1, 7):
            assert hall_dims(n)[-1] == necklace(n)

    def test_primitive_dimension_matches(self):
        for r in (1, 2, 3, 4):
            assert primitive_space_dimension(r) == sum(hall_dims(r))

    def test_representatives_expand_independently(self):
        from alblab import linalg
        from alblab.malcev import bracket_expansion
        from alblab.words import word_basis
        for d in range(1, 5):
            words_d = [w for w in word_basis(d) if len(w) == d]
            rows = []
            for w in lyndon_words(d):
                exp = dict(bracket_expansion(w))
                rows.append([Fraction(exp.get(t, 0)) for t in words_d])
            assert linalg.rank(rows) == len(rows)


def _mobius(n):
    if n == 1:
        return 1
    result = 1
    p = 2
    m = n
    seen = set()
    while p * p <= m:
        if m % p == 0:
            if p in seen:
                return 0
            seen.add(p)
            m //= p
            if m % p == 0:
                return 0
            result = -result
        else:
            p += 1
    if m > 1:
        result = -result
    return result


class TestGroupWords:
    def test_parse_and_reduce(self):
        w = GroupWord.from_string("0 0^-1 1")
        assert w.letters == (("1", 1),)

    def test_power_expansion(self):
        w = GroupWord.from_string("0^2 1^-2")
        assert w.letters == (("0", 1), ("0", 1), ("1", -1), ("1", -1))

    def test_inverse(self):
        w = GroupWord.from_string("0 1")
        assert (w * w.inverse()).letters == ()

    def test_bad_token(self):
        with pytest.raises(ValueError):
            GroupWord.from_string("2")


class TestMalcevCoordinates:
    def test_generator(self):
        assert malcev_coordinates("0", 2) == {"0": Fraction(1)}

    def test_commutator(self):
        assert malcev_coordinates("0 1 0^-1 1^-1", 2) == {"01": Fraction(1)}

    def test_product_of_generators(self):
        coords = malcev_coordinates("0 1", 2)
        assert coords == {"0": Fraction(1), "1": Fraction(1), "01": Fraction(1, 2)}

    def test_homomorphism(self, rng):
        words = ["0", "1", "0 1", "1^-1 0", "0 1 0^-1", "1 1 0^-1"]
        for _ in range(10):
            w1 = words[int(rng.integers(0, len(words)))]
            w2 = words[int(rng.integers(0, len(words)))]
            level = int(rng.integers(2, 5))
            g1 = GroupWord.from_string(w1)
            g2 = GroupWord.from_string(w2)
            lhs = group_log(g1 * g2, level)
            rhs = bch(group_log(g1, level), group_log(g2, level))
            assert lhs.coeffs == rhs.coeffs

    def test_triple_commutator_collapses_at_level2(self):
        # elements of the third lower-central term vanish at level 2
        def invert(word):
            return " ".join(t[:-3] if t.endswith("^-1") else t + "^-1"
                            for t in reversed(word.split()))

        inner = "0 1 0^-1 1^-1"
        for outer in ("0", "1", "0 1"):
            word = f"{outer} {inner} {invert(outer)} {invert(inner)}"
            assert malcev_coordinates(word, 2) == {}
            assert malcev_coordinates(word, 3) != {}

    def test_hall_coordinates_reject_non_primitive(self):
        with pytest.raises(ValueError):
            hall_coordinates(ExactSeries(2, {"01": Fraction(1), "10": Fraction(1)}))


class TestSerialization:
    def test_round_trip(self):
        s = ExactSeries(3, {"01": Fraction(2, 3), "": Fraction(1)})
        assert ExactSeries.from_json(s.to_json()).coeffs == s.coeffs
