import math
import random

import pytest

from apcorona import (
    APPolynomial,
    CoronaConfig,
    Semigroup,
    certify_infimum,
    infimum_grid_oracle,
    invert,
    solve_bezout,
)
from apcorona.errors import (
    ConfigError,
    InsufficientDegreeError,
    NotInvertibleError,
    SpectrumViolationError,
)


def e(basis, spec, coeff=1):
    return APPolynomial.exponential(basis, spec, coeff)


class TestCertify:
    def test_single_function_bracket(self, sg_n):
        f = e(sg_n.basis, 1) - 2
        cert = certify_infimum([f], sg_n)
        # true infimum is 1 (attained at z = 0): |w - 2| >= 1 on |w| <= 1
        assert cert.mode == "certified-periodic"
        assert 0.9 <= cert.lower_bound <= 1.0

    def test_pair_bracket(self, sg_n):
        b = sg_n.basis
        fs = [e(b, 1) - 2, e(b, 1)]
        cert = certify_infimum(fs, sg_n)
        # |w - 2| + |w| >= 2 on the disk, with equality on [0, 1]
        assert 1.8 <= cert.lower_bound <= 2.0

    def test_certificate_below_dense_oracle(self, sg_n):
        b = sg_n.basis
        for fs in ([e(b, 1) - 2], [e(b, 1) - 2, e(b, 1)],
                   [e(b, 2, 0.5) + e(b, 1, 0.3) + 1.5]):
            cert = certify_infimum(fs, sg_n)
            observed = infimum_grid_oracle(fs, cert, refine=10)
            assert cert.lower_bound <= observed + 1e-12

    def test_vanishing_constant_terms_definitive_zero(self, sg_n):
        cert = certify_infimum([e(sg_n.basis, 1)], sg_n)
        assert cert.infimum_zero
        assert cert.lower_bound == 0.0

    def test_constants_only(self, sg_n):
        cert = certify_infimum([APPolynomial.constant(sg_n.basis, 2 + 0j)], sg_n)
        assert cert.lower_bound == 2.0
        assert cert.mode == "certified-periodic"

    def test_heuristic_mode_flagged(self, sg_pell):
        b = sg_pell.basis
        f = e(b, 1, 0.25) + e(b, {"s": 1}, 0.25) + 1
        cert = certify_infimum([f], sg_pell)
        assert cert.mode == "heuristic"
        assert not cert.is_certified
        assert cert.lower_bound > 0

    def test_spectrum_validated(self, sg_23):
        with pytest.raises(SpectrumViolationError):
            certify_infimum([e(sg_23.basis, 1)], sg_23)

    def test_certificate_formula(self, sg_n):
        f = e(sg_n.basis, 1) - 2
        cert = certify_infimum([f], sg_n)
        margin = cert.lipschitz * cert.grid_step * math.sqrt(2)
        assert cert.lower_bound == pytest.approx(
            max(0.0, min(cert.grid_min - margin, cert.tail_bound)))
        assert cert.strip_width == pytest.approx(2 * math.pi)

    def test_tail_fraction_validation(self):
        with pytest.raises(ConfigError):
            CoronaConfig(tail_fraction=0.7)


class TestBezout:
    def test_worked_pair_exact(self, sg_n):
        b = sg_n.basis
        sol = solve_bezout([e(b, 1) - 2, e(b, 1)], sg_n, 1, 1e-12)
        assert sol.residual_upper <= 1e-12
        g1, g2 = sol.partners
        assert abs(g1.constant_coefficient + 0.5) < 1e-12 and len(g1) == 1
        assert abs(g2.constant_coefficient - 0.5) < 1e-12 and len(g2) == 1

    def test_constant_inverse(self, sg_n):
        sol = solve_bezout([APPolynomial.constant(sg_n.basis, 2)], sg_n, 1, 1e-12)
        assert sol.residual_upper <= 1e-14
        assert abs(sol.partners[0].constant_coefficient - 0.5) < 1e-14

    def test_geometric_series_single(self, sg_n):
        f = e(sg_n.basis, 1) - 2
        degree = 12
        sol = solve_bezout([f], sg_n, degree, 1e-10)
        # the closed-form candidate -(1/2) sum e_k / 2^k on {0..K-1} leaves
        # the exact residual e_K / 2^K, so least squares can only do better
        assert sol.pre_correction_l2 <= 2.0 ** -degree + 1e-12
        assert sol.residual_upper <= 1e-10

    def test_insufficient_degree_raises(self, sg_n):
        f = e(sg_n.basis, 1) - 2
        with pytest.raises(InsufficientDegreeError):
            # one constant cannot invert e_1 - 2 to residual < 1... force it
            solve_bezout([e(sg_n.basis, 1, 0.9) + 0.1], sg_n, 1, 1e-12)

    def test_partners_stay_in_semigroup(self, sg_23):
        b = sg_23.basis
        fs = [e(b, 2) - 2, e(b, 3, 0.5) + 1]
        sol = solve_bezout(fs, sg_23, 8, 1e-10)
        for g in sol.partners:
            assert sg_23.validate_spectrum(g).contained

    def test_residual_bound_dominates_samples(self, sg_n):
        b = sg_n.basis
        fs = [e(b, 1) - 2, e(b, 2, 0.5) + 1]
        sol = solve_bezout(fs, sg_n, 6, 1e-9)
        rng = random.Random(3)
        total = lambda z: sum(f.eval_upper(z) * g.eval_upper(z)
                              for f, g in zip(fs, sol.partners))
        for _ in range(50):
            z = complex(rng.uniform(-20, 20), rng.uniform(0, 6))
            assert abs(total(z) - 1) <= sol.residual_upper + 1e-12

    def test_monotone_in_degree(self, sg_n):
        b = sg_n.basis
        fs = [e(b, 1) - 2, e(b, 2, 0.4) + 0.2]
        previous = math.inf
        for degree in (2, 4, 8, 16):
            sol = solve_bezout(fs, sg_n, degree, 1e-14, max_correction_rounds=6)
            assert sol.pre_correction_l2 <= previous + 1e-15
            previous = sol.pre_correction_l2


class TestInvert:
    def test_constant(self, sg_n):
        u = invert(APPolynomial.constant(sg_n.basis, 2), sg_n, 1e-12)
        assert u == APPolynomial.constant(sg_n.basis, 0.5)

    def test_neumann_geometric(self, sg_n):
        b = sg_n.basis
        f = 1 - e(b, 1, 0.5)
        u = invert(f, sg_n, tol=2.0 ** -30)
        assert len(u) == 30
        residual = (f * u - 1).l1_norm()
        assert residual <= 2.0 ** -30 * 2
        # coefficients follow the geometric series exactly
        for k in range(30):
            assert abs(u.coefficient(k) - 0.5 ** k) < 1e-15

    def test_no_constant_term(self, sg_n):
        with pytest.raises(NotInvertibleError):
            invert(e(sg_n.basis, 1), sg_n, 1e-9)

    def test_outside_neumann_radius_falls_back(self, sg_n):
        b = sg_n.basis
        # 3 + 2w + 2w^2 has no zeros in the closed unit disk but the
        # centered remainder has mass 4/3 > 1
        f = e(b, 2, 2) + e(b, 1, 2) + 3
        u = invert(f, sg_n, 1e-8)
        assert (f * u - 1).l1_norm() <= 1e-8
