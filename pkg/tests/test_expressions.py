import random
from fractions import Fraction

import pytest

from apcorona import (
    APPolynomial,
    parse_ap_expression,
    parse_frequency,
    render,
    render_frequency,
)
from apcorona.errors import ExpressionError, NegativeFrequencyError


class TestParsing:
    def test_linear_combination(self, unit_basis):
        p = parse_ap_expression("3*e(1) - 2*e(0)", unit_basis)
        assert p.coefficient(1) == 3
        assert p.coefficient(0) == -2

    def test_difference_of_squares(self, sqrt2_basis):
        p = parse_ap_expression("(e(1)+e(s))*(e(1)-e(s))", sqrt2_basis)
        assert p.coefficient(2) == 1
        assert p.coefficient({"s": 2}) == -1
        assert len(p) == 2

    def test_negative_frequency_rejected(self, unit_basis):
        with pytest.raises(NegativeFrequencyError):
            parse_ap_expression("e(-1)", unit_basis)

    def test_rational_label_combination(self, sqrt2_basis):
        p = parse_ap_expression("e(3/2 + 2*s)", sqrt2_basis)
        (freq,) = p.spectrum()
        assert freq.coords == (Fraction(3, 2), Fraction(2))

    def test_complex_literals(self, unit_basis):
        p = parse_ap_expression("(2+3i)*e(1) - i", unit_basis)
        assert p.coefficient(1) == 2 + 3j
        assert p.coefficient(0) == -1j

    def test_scientific_notation_coefficient(self, unit_basis):
        p = parse_ap_expression("1e-3*e(1)", unit_basis)
        assert p.coefficient(1) == 1e-3

    def test_division_by_literal(self, unit_basis):
        p = parse_ap_expression("e(1)/2 + 3/4", unit_basis)
        assert p.coefficient(1) == 0.5
        assert p.coefficient(0) == 0.75

    def test_float_frequency_rejected(self, unit_basis):
        with pytest.raises(ExpressionError) as info:
            parse_ap_expression("e(1.5)", unit_basis)
        assert info.value.position is not None

    def test_unknown_label(self, unit_basis):
        with pytest.raises(Exception):
            parse_ap_expression("e(2*t)", unit_basis)

    def test_error_carries_position(self, unit_basis):
        with pytest.raises(ExpressionError) as info:
            parse_ap_expression("3*e(1) + $", unit_basis)
        assert info.value.position == 9

    def test_trailing_garbage(self, unit_basis):
        with pytest.raises(ExpressionError):
            parse_ap_expression("e(1) e(2)", unit_basis)

    def test_frequency_text(self, sqrt2_basis):
        f = parse_frequency("s - 1", sqrt2_basis)
        assert f.coords == (Fraction(-1), Fraction(1))
        g = parse_frequency("-1 + s", sqrt2_basis)
        assert g == f


class TestRender:
    def test_round_trip_examples(self, sqrt2_basis):
        for text in ("3*e(1) - 2*e(0)", "(2.5-0.3i)*e(1) + e(s/2)",
                     "(e(1)+e(s))*(e(1)-e(s))"):
            p = parse_ap_expression(text, sqrt2_basis)
            assert parse_ap_expression(render(p), sqrt2_basis) == p

    def test_round_trip_random(self, sqrt2_basis):
        rng = random.Random(61)
        for _ in range(150):
            terms = {}
            for _ in range(rng.randint(1, 6)):
                freq = sqrt2_basis.frequency({
                    "one": Fraction(rng.randint(0, 12), rng.randint(1, 4)),
                    "s": Fraction(rng.randint(0, 8), rng.randint(1, 3))})
                terms[freq] = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
            p = APPolynomial(sqrt2_basis, terms)
            assert parse_ap_expression(render(p), sqrt2_basis) == p

    def test_zero_polynomial(self, unit_basis):
        z = APPolynomial.zero(unit_basis)
        assert parse_ap_expression(render(z), unit_basis) == z

    def test_frequency_rendering_signs(self, sqrt2_basis):
        f = sqrt2_basis.frequency({"one": 1, "s": -1})
        assert render_frequency(f) == "1 - s"
        assert parse_frequency(render_frequency(f), sqrt2_basis) == f
