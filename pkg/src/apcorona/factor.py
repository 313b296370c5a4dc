"""Constructive exponentials and logarithms inside a spectrum-constrained
algebra.

An invertible function with positive certified corona bound is written as
``exp(g)`` with ``g`` supported on the same semigroup.  A coarse first
guess walks the contraction path: damping coefficients by ``t**lam`` moves
the function toward its constant term while (by the translation identity)
its half-plane values stay values of the original function higher up, so
the corona bound persists along the whole path.  Each step between
neighbouring path points is a near-1 ratio with a short Mercator series
logarithm; the constant term contributes its principal scalar logarithm,
anchoring the branch.  Newton polish rounds
``g += log(1 + (f - exp(g)) * exp(g)^-1)`` then drive the exp-verification
residual below tolerance; the error is quadratic in the per-round defect,
so a handful of rounds suffices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .algebra import APPolynomial
from .corona import CoronaCertificate
from .errors import (
    ConfigError,
    CoronaConditionError,
    IncreaseOrderError,
    NotInvertibleError,
    SpectrumViolationError,
    StageCapError,
)
from .semigroup import Semigroup


@dataclass(frozen=True)
class ExpResult:
    poly: APPolynomial
    tail_bound: float
    order: int


def exp_tail_bound(mass: float, order: int) -> float:
    """Rigorous bound on ``sum_{m>order} mass**m / m!`` via the geometric
    majorant; infinite when the ratio test fails at the cutoff."""
    if mass == 0.0:
        return 0.0
    if mass >= order + 2:
        return math.inf
    try:
        head = mass ** (order + 1) / math.factorial(order + 1)
    except OverflowError:
        return math.inf
    return head / (1.0 - mass / (order + 2))


def exp_truncated(g: APPolynomial, sg: Semigroup, order: int,
                  tol: float | None = None) -> ExpResult:
    """Partial exponential sum ``sum_{m<=order} g**m / m!`` in exact-spectrum
    arithmetic, with the reported tail bound.

    With ``tol`` given, a tail bound above it raises
    :class:`IncreaseOrderError` instead of returning a poor truncation.
    """
    if order < 1:
        raise ConfigError("order must be >= 1")
    _check_spectrum(g, sg)
    tail = exp_tail_bound(g.l1_norm(), order)
    if tol is not None and tail > tol:
        raise IncreaseOrderError(
            f"tail bound {tail:.3g} exceeds tolerance {tol:.3g}: increase order",
            tail_bound=tail)
    total = APPolynomial.constant(g.basis, 1)
    term = APPolynomial.constant(g.basis, 1)
    for m in range(1, order + 1):
        term = term * g * (1.0 / m)
        total = total + term
    return ExpResult(total, tail, order)


def exp_auto(g: APPolynomial, sg: Semigroup, tol: float,
             max_order: int = 500) -> ExpResult:
    """Exponential truncated adaptively: stops as soon as the running term
    norm certifies the remaining tail below ``tol``.

    High-frequency dust is trimmed from the running term with rigorous
    accounting: mass dropped at step m can propagate into later terms with
    a factor at most ``e**mass``, and that allowance is folded into the
    reported tail bound (half the tolerance is reserved for it).
    """
    _check_spectrum(g, sg)
    mass = g.l1_norm()
    amplification = math.exp(min(mass, 700.0))
    total = APPolynomial.constant(g.basis, 1)
    term = APPolynomial.constant(g.basis, 1)
    dropped_effect = 0.0
    for m in range(1, max_order + 1):
        term = term * g * (1.0 / m)
        term, dust = term.truncate_tail(
            0.5 * tol * 0.5 ** m / amplification)
        dropped_effect += dust * amplification
        total = total + term
        q = mass / (m + 1)
        if q < 1.0:
            tail = term.l1_norm() * q / (1.0 - q) + dropped_effect
            if tail <= tol:
                return ExpResult(total, tail, m)
    raise IncreaseOrderError(
        f"no order up to {max_order} reaches tolerance {tol:.3g}")


def exp_shifted(g: APPolynomial, sg: Semigroup, tol: float) -> ExpResult:
    """Exponential computed as ``exp(c0) * exp(g - c0)``: the scalar part
    commutes out exactly and the series order only depends on the mass of
    the frequency-positive remainder."""
    c = g.constant_coefficient
    if c == 0:
        return exp_auto(g, sg, tol)
    scale = cmath.exp(c)
    rest = g - APPolynomial.constant(g.basis, c)
    inner = exp_auto(rest, sg, tol / abs(scale))
    return ExpResult(inner.poly * scale, inner.tail_bound * abs(scale),
                     inner.order)


def _check_spectrum(g: APPolynomial, sg: Semigroup):
    check = sg.validate_spectrum(g)
    if not check.contained:
        raise SpectrumViolationError(
            f"spectrum leaves the semigroup at {check.violation.as_text()}",
            violation=check.violation)


@dataclass(frozen=True)
class LogPath:
    """Record of the contraction walk and polish used for a logarithm.

    ``t_schedule`` descends from 1 to the strongest contraction used; the
    k-th ratio relates neighbouring path points and carries its own series
    logarithm.  The scalar principal logarithm of the constant term anchors
    the branch.
    """

    t_schedule: tuple[float, ...]
    stage_ratio_norms: tuple[float, ...]
    stage_logs: tuple[APPolynomial, ...]
    scalar_log: complex
    polish_rounds: int
    dropped_mass: float
    verified_residual: float


@dataclass(frozen=True)
class LogConfig:
    schedule_ratio: float = 0.9
    stage_radius: float = 0.5
    direct_radius: float = 0.75
    #: accuracy of the coarse walk; Newton polish removes the slack
    walk_budget: float = 5e-3
    stage_cap: int = 240
    bisection_cap: int = 60
    polish_cap: int = 12

    def __post_init__(self):
        if not 0 < self.schedule_ratio < 1:
            raise ConfigError("schedule ratio must lie in (0, 1)")
        if not 0 < self.stage_radius < 1 or not 0 < self.direct_radius < 1:
            raise ConfigError("radii must lie in (0, 1)")


def _mercator_log(near_one: APPolynomial, budget: float) -> APPolynomial:
    """``log(a)`` for ``a = 1 - r`` with ``|r|``-mass < 1, truncated so the
    series tail stays within ``budget``.  Running powers are dust-trimmed;
    consumers re-measure the result downstream, so the trim only needs the
    geometric amplification allowance ``1/(1-rho)``."""
    r = 1 - near_one
    rho = r.l1_norm()
    if rho == 0.0:
        return APPolynomial.zero(near_one.basis)
    if rho >= 1.0:
        raise ValueError(f"outside the Mercator radius: mass {rho:.3g}")
    trim = budget * (1.0 - rho) / 8.0
    total = APPolynomial.zero(near_one.basis)
    power = APPolynomial.constant(near_one.basis, 1)
    m = 0
    while True:
        m += 1
        power = power * r
        power, _ = power.truncate_tail(trim * 0.5 ** m)
        total = total - power * (1.0 / m)
        tail = power.l1_norm() * rho / ((m + 1) * (1.0 - rho))
        if tail <= budget:
            return total
        if m > 10_000:
            raise ValueError("log series will not reach the budget")


def logarithm_with_path(f: APPolynomial, sg: Semigroup,
                        cert: CoronaCertificate, tol: float = 1e-9,
                        config: LogConfig | None = None) -> tuple[APPolynomial, LogPath]:
    """Logarithm with the full path record; see :func:`logarithm`."""
    config = config or LogConfig()
    if cert is None or cert.lower_bound <= 0.0 or cert.infimum_zero:
        raise CoronaConditionError(
            "a positive certified corona lower bound is required")
    c0 = f.constant_coefficient
    if c0 == 0:
        raise NotInvertibleError("constant term vanishes; no logarithm")
    _check_spectrum(f, sg)

    g, schedule, ratio_norms, stage_logs, dropped = _coarse_walk(f, sg, c0, config)
    # series dust spreads tiny coefficients over many frequencies and makes
    # every later product quadratically slower; the polish rounds absorb
    # whatever mass the trim drops
    g, dust = g.truncate_tail(config.walk_budget)
    dropped += dust

    exp_tol = tol / 4.0
    rounds = 0
    residual = math.inf
    for rounds in range(config.polish_cap + 1):
        approx = exp_shifted(g, sg, exp_tol)
        residual = (approx.poly - f).l1_norm() + approx.tail_bound
        if residual <= tol:
            path = LogPath(tuple(schedule), tuple(ratio_norms),
                           tuple(stage_logs), cmath.log(c0), rounds,
                           dropped, residual)
            return g, path
        # exp(-g) is a ready-made coarse inverse of exp(g); the correction
        # error is quadratic: |f - exp(g)| * |1 - exp(g)exp(-g)|
        inverse = exp_shifted(-g, sg, min(1e-3, residual)).poly
        defect = (f - approx.poly) * inverse
        if defect.l1_norm() >= 1.0:
            raise StageCapError(
                f"polish defect mass {defect.l1_norm():.3g} >= 1; "
                "coarse walk too far from a logarithm")
        g = g + _mercator_log(1 + defect, max(tol / 16.0, residual / 64.0))
        g, dust = g.truncate_tail(max(tol / (64.0 * config.polish_cap),
                                      residual / 64.0))
        dropped += dust
    raise StageCapError(
        f"verification residual {residual:.3g} above tolerance {tol:.3g} "
        f"after {config.polish_cap} polish rounds")


def _coarse_walk(f: APPolynomial, sg: Semigroup, c0: complex, config: LogConfig):
    basis = f.basis
    a = f * (1.0 / c0)
    g = APPolynomial.constant(basis, cmath.log(c0))
    budget = config.walk_budget
    stage_logs: list[APPolynomial] = []
    ratio_norms: list[float] = []
    dropped_total = 0.0

    rho_direct = (1 - a).l1_norm()
    if rho_direct <= config.direct_radius:
        step_log = _mercator_log(a, budget)
        stage_logs.append(step_log)
        ratio_norms.append(rho_direct)
        return g + step_log, [1.0], ratio_norms, stage_logs, dropped_total

    # contract until the positive-frequency mass fits inside the radius
    tail_mass = sum(abs(c) for freq, c in a.items() if not freq.is_zero)
    lam_min = a.min_positive_frequency()
    t = min(1.0, (config.stage_radius / tail_mass) ** (1.0 / lam_min))
    start = a.contract(t)
    step_log = _mercator_log(start, budget)
    stage_logs.append(step_log)
    ratio_norms.append((1 - start).l1_norm())
    g = g + step_log
    schedule = [t]
    # running reciprocal of the current path point, kept fresh by Newton
    # steps (u <- u*(2 - a_t*u) squares the defect); never needs a solver
    reciprocal = _neumann_reciprocal(start, budget)

    stages = 0
    while t < 1.0:
        stages += 1
        if stages > config.stage_cap:
            raise StageCapError(f"more than {config.stage_cap} path stages")
        t_next = min(1.0, t / config.schedule_ratio)
        ratio = None
        rho = math.inf
        for _ in range(config.bisection_cap):
            candidate = a.contract(t_next) * reciprocal
            rho = (1 - candidate).l1_norm()
            if rho <= config.stage_radius:
                ratio = candidate
                break
            t_next = math.sqrt(t * t_next)
        if ratio is None:
            raise StageCapError(
                f"stage from t={t:.6g} would not enter the Neumann radius")
        step_log = _mercator_log(ratio, budget)
        stage_logs.append(step_log)
        ratio_norms.append(rho)
        g = g + step_log
        g, dust = g.truncate_tail(budget / (4.0 * config.stage_cap))
        dropped_total += dust
        t = t_next
        schedule.append(t)
        if t < 1.0:
            reciprocal = _refresh_reciprocal(a.contract(t), reciprocal,
                                             budget, config)

    schedule_desc = sorted(set(schedule) | {1.0}, reverse=True)
    return g, schedule_desc, ratio_norms, stage_logs, dropped_total


def _neumann_reciprocal(near_one: APPolynomial, budget: float) -> APPolynomial:
    """Reciprocal of ``a = 1 - r`` with ``|r|``-mass < 1 via the geometric
    series, truncated to the budget.  Defects are re-measured by the
    caller, so running powers are dust-trimmed."""
    r = 1 - near_one
    rho = r.l1_norm()
    total = APPolynomial.constant(near_one.basis, 1)
    if rho == 0.0:
        return total
    trim = budget * (1.0 - rho) / 8.0
    power = APPolynomial.constant(near_one.basis, 1)
    m = 0
    while True:
        m += 1
        power = power * r
        power, _ = power.truncate_tail(trim * 0.5 ** m)
        total = total + power
        if power.l1_norm() * rho / (1.0 - rho) <= budget:
            return total
        if m > 10_000:
            raise ValueError("reciprocal series will not reach the budget")


def _refresh_reciprocal(target: APPolynomial, u: APPolynomial,
                        budget: float, config: LogConfig) -> APPolynomial:
    for _ in range(config.bisection_cap):
        defect = 1 - target * u
        if defect.l1_norm() <= budget:
            return u
        u = u + u * defect
        u, _ = u.truncate_tail(budget / 8.0)
    raise StageCapError("reciprocal refresh did not converge")


def logarithm(f: APPolynomial, sg: Semigroup, cert: CoronaCertificate,
              tol: float = 1e-9, config: LogConfig | None = None) -> APPolynomial:
    """Find ``g`` with spectrum inside the semigroup and ``exp(g) ~= f``.

    The exp-verification residual (coefficient-sum of the difference plus
    the exponential tail bound) is guaranteed <= ``tol`` on return.  The
    branch is the principal one at the constant term.
    """
    g, _ = logarithm_with_path(f, sg, cert, tol, config)
    return g
