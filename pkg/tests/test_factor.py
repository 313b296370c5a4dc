import cmath
import math
import random

import pytest

from apcorona import (
    APPolynomial,
    LogConfig,
    Semigroup,
    certify_infimum,
    exp_auto,
    exp_truncated,
    logarithm,
    logarithm_with_path,
)
from apcorona.errors import (
    CoronaConditionError,
    IncreaseOrderError,
    NotInvertibleError,
    SpectrumViolationError,
)


def e(basis, spec, coeff=1):
    return APPolynomial.exponential(basis, spec, coeff)


class TestExp:
    def test_zero_exponent(self, sg_n):
        res = exp_truncated(APPolynomial.zero(sg_n.basis), sg_n, 5)
        assert res.poly == APPolynomial.constant(sg_n.basis, 1)
        assert res.tail_bound == 0.0

    def test_euler_identity(self, sg_n):
        g = APPolynomial.constant(sg_n.basis, 1j * math.pi)
        res = exp_truncated(g, sg_n, 40)
        assert abs(res.poly.constant_coefficient + 1) < 1e-12
        assert res.tail_bound < 1e-12

    def test_character_quarter_closed_form(self, sg_n):
        g = e(sg_n.basis, 1, 0.25)
        res = exp_truncated(g, sg_n, 20)
        for m in range(21):
            expected = 0.25 ** m / math.factorial(m)
            assert abs(res.poly.coefficient(m) - expected) < 1e-12

    def test_tail_bound_gate(self, sg_n):
        g = e(sg_n.basis, 1, 2.0)
        with pytest.raises(IncreaseOrderError):
            exp_truncated(g, sg_n, 2, tol=1e-6)

    def test_spectrum_enforced(self, sg_23):
        with pytest.raises(SpectrumViolationError):
            exp_truncated(e(sg_23.basis, 1), sg_23, 5)

    def test_spectrum_containment_exact(self, sg_23):
        g = e(sg_23.basis, 2, 0.3) + e(sg_23.basis, 3, 0.2j)
        res = exp_truncated(g, sg_23, 12)
        assert sg_23.validate_spectrum(res.poly).contained

    def test_exp_auto_meets_tolerance(self, sg_n):
        g = e(sg_n.basis, 1, 0.8) + 0.3j
        res = exp_auto(g, sg_n, 1e-11)
        ref = exp_truncated(g, sg_n, res.order + 25)
        assert (res.poly - ref.poly).l1_norm() <= 1e-10


class TestLogarithm:
    def test_scalar_constant(self, sg_n):
        f = APPolynomial.constant(sg_n.basis, math.e)
        cert = certify_infimum([f], sg_n)
        g = logarithm(f, sg_n, cert, 1e-10)
        assert (g - 1).l1_norm() < 1e-10

    def test_forward_roundtrip_quarter(self, sg_n):
        p = e(sg_n.basis, 1, 0.25)
        f = exp_truncated(p, sg_n, 25).poly
        cert = certify_infimum([f], sg_n)
        g = logarithm(f, sg_n, cert, 1e-9)
        assert all(abs(g.coefficient(k) - p.coefficient(k)) < 1e-6
                   for k in range(6))

    def test_principal_branch_anchor(self, sg_n):
        f = e(sg_n.basis, 1) - 2
        cert = certify_infimum([f], sg_n)
        g, path = logarithm_with_path(f, sg_n, cert, 1e-9)
        # Log(-2) = ln 2 + i*pi on the principal branch
        assert abs(g.constant_coefficient - (math.log(2) + 1j * math.pi)) < 1e-8
        assert path.scalar_log == cmath.log(-2)
        assert path.verified_residual <= 1e-9

    def test_exp_verification(self, sg_n):
        f = e(sg_n.basis, 1) - 2
        cert = certify_infimum([f], sg_n)
        g = logarithm(f, sg_n, cert, 1e-9)
        back = exp_auto(g, sg_n, 1e-12)
        assert (back.poly - f).l1_norm() <= 1e-9

    def test_requires_positive_certificate(self, sg_n):
        f = e(sg_n.basis, 1)
        cert = certify_infimum([f], sg_n)  # definitive zero
        with pytest.raises((CoronaConditionError, NotInvertibleError)):
            logarithm(f, sg_n, cert, 1e-9)

    def test_spectrum_containment(self, sg_23):
        b = sg_23.basis
        p = e(b, 2, 0.3) + e(b, 3, -0.2)
        f = exp_truncated(p, sg_23, 20).poly
        cert = certify_infimum([f], sg_23)
        g = logarithm(f, sg_23, cert, 1e-8)
        assert sg_23.validate_spectrum(g).contained

    def test_roundtrip_random(self, sg_n):
        rng = random.Random(29)
        for _ in range(6):
            terms = {k: rng.uniform(0.05, 0.3) * cmath.exp(2j * math.pi * rng.random())
                     for k in rng.sample(range(1, 7), 3)}
            p = APPolynomial.from_dict(sg_n.basis, terms)
            f = exp_auto(p, sg_n, 1e-13).poly
            cert = certify_infimum([f], sg_n)
            g = logarithm(f, sg_n, cert, 1e-8)
            assert (g - p).l1_norm() <= 1e-6

    def test_path_schedule_monotone(self, sg_n):
        # force the walk by putting the function outside the direct radius
        b = sg_n.basis
        p = e(b, 1, 0.5) + e(b, 2, 0.4) + e(b, 3, 0.3)
        f = exp_auto(p, sg_n, 1e-13).poly
        cert = certify_infimum([f], sg_n)
        g, path = logarithm_with_path(f, sg_n, cert, 1e-8)
        assert (g - p).l1_norm() <= 1e-6
        assert len(path.t_schedule) > 1
        assert list(path.t_schedule) == sorted(path.t_schedule, reverse=True)
        assert path.t_schedule[0] == 1.0
        assert path.t_schedule[-1] > 0
        # every stage ratio stayed inside the Neumann radius
        assert all(r < 1 for r in path.stage_ratio_norms)

    def test_schedule_refinement_stability(self, sg_n):
        # a finer schedule moves the answer by no more than the verified
        # residual scale (path independence at desk scale)
        b = sg_n.basis
        p = e(b, 1, 0.5) + e(b, 2, 0.45)
        f = exp_auto(p, sg_n, 1e-13).poly
        cert = certify_infimum([f], sg_n)
        g1 = logarithm(f, sg_n, cert, 1e-10)
        g2 = logarithm(f, sg_n, cert, 1e-10,
                       LogConfig(schedule_ratio=0.97, stage_radius=0.3))
        assert (g1 - g2).l1_norm() <= 1e-8

    def test_corona_persistence_along_path(self, sg_n):
        f = e(sg_n.basis, 1) - 2
        cert = certify_infimum([f], sg_n)
        for t in (0.9, 0.7, 0.4, 0.1):
            moved = f.contract(t)
            cert_t = certify_infimum([moved], sg_n)
            assert cert_t.lower_bound >= cert.lower_bound - 1e-12
