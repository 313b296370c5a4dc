"""Exact frequency arithmetic and the algebra of almost periodic polynomials.

A *frequency* is an exact rational vector over a declared basis of real
numbers (the first basis element is always 1).  Two frequencies are equal
iff their coordinate vectors are equal; order is decided by evaluating the
difference in ball arithmetic at escalating precision.  Keeping frequencies
exact is what makes spectra, semigroup membership and convolution supports
reliable: floating frequencies would silently merge or split terms.

An :class:`APPolynomial` is a finite complex-linear combination of the
characters ``x -> exp(i*lambda*x)`` with frequencies ``lambda >= 0``.
Coefficients are ordinary complex floats (they are analytic data, not
combinatorial data); the exact/float boundary is: frequencies exact,
coefficients float.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np
from mpmath import iv, mpf

from .errors import (
    BasisError,
    BasisMismatchError,
    HalfPlaneError,
    NegativeFrequencyError,
    UnresolvableComparisonError,
)

#: Working precision (bits) where comparisons start; doubled until the
#: basis precision ceiling is passed.  A ceiling below this value makes
#: every non-exact comparison unresolvable by definition.
MIN_COMPARE_PREC = 32

DEFAULT_PRECISION_CEILING = 4096

RationalLike = Union[int, Fraction]
#: Basis value: an exact rational, or a thunk evaluated under ``mpmath.iv``
#: at the current interval precision (e.g. ``lambda: iv.sqrt(2)``).
BasisValue = Union[RationalLike, str, Callable[[], object]]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected a rational value, got {x!r}")


def _fraction_to_interval(q: Fraction):
    # iv division of two exact integers yields a rigorous enclosure
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


class FrequencyBasis:
    """Ordered list of labelled real numbers; the ground set for frequencies.

    The first label always has exact value 1.  Non-rational entries are
    given as thunks producing an ``mpmath.iv`` enclosure so they can be
    re-evaluated at any precision.  Rational independence of the declared
    values is an assumption, not something the library verifies; a
    dependent basis surfaces as :class:`UnresolvableComparisonError`.
    """

    __slots__ = ("labels", "_exact", "_thunks", "precision_ceiling",
                 "_interval_cache", "_float_cache", "_index",
                 "_freq_intern", "_sum_memo")

    def __init__(self, entries: Sequence[tuple[str, BasisValue]],
                 precision_ceiling: int = DEFAULT_PRECISION_CEILING):
        if precision_ceiling < 1:
            raise BasisError("precision ceiling must be positive")
        entries = list(entries)
        if not entries or not _is_exact_one(entries[0][1]):
            entries.insert(0, ("one", 1))
        labels = []
        exact: list[Fraction | None] = []
        thunks: list[Callable[[], object] | None] = []
        for label, value in entries:
            if not isinstance(label, str) or not label:
                raise BasisError(f"bad label {label!r}")
            if label in labels:
                raise BasisError(f"duplicate label {label!r}")
            labels.append(label)
            if callable(value):
                exact.append(None)
                thunks.append(value)
            else:
                exact.append(_as_fraction(value))
                thunks.append(None)
        self.labels = tuple(labels)
        self._exact = tuple(exact)
        self._thunks = tuple(thunks)
        self.precision_ceiling = int(precision_ceiling)
        self._interval_cache: dict[int, tuple] = {}
        self._float_cache: tuple[float, ...] | None = None
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._freq_intern: dict[tuple, "Frequency"] = {}
        self._sum_memo: dict[tuple[int, int], "Frequency"] = {}
        # refine every enclosure once at the minimum working precision and
        # reject non-finite values up front
        for v in self.values_interval(max(MIN_COMPARE_PREC, 64)):
            lo, hi = mpf(v.a), mpf(v.b)
            if not (math.isfinite(float(lo)) and math.isfinite(float(hi))):
                raise BasisError("basis value is not finite")

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FrequencyBasis({', '.join(self.labels)})"

    def label_index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise BasisError(f"unknown basis label {label!r}") from None

    def is_exact(self, i: int) -> bool:
        return self._exact[i] is not None

    def exact_value(self, i: int) -> Fraction:
        v = self._exact[i]
        if v is None:
            raise BasisError(f"basis entry {self.labels[i]!r} is not rational")
        return v

    def values_interval(self, prec: int) -> tuple:
        """Enclosures of all basis values at ``prec`` bits (cached)."""
        cached = self._interval_cache.get(prec)
        if cached is not None:
            return cached
        saved = iv.prec
        try:
            iv.prec = prec
            vals = []
            for q, thunk in zip(self._exact, self._thunks):
                vals.append(_fraction_to_interval(q) if thunk is None else thunk())
            vals = tuple(vals)
        finally:
            iv.prec = saved
        self._interval_cache[prec] = vals
        return vals

    def values_float(self) -> tuple[float, ...]:
        if self._float_cache is None:
            vals = self.values_interval(64)
            self._float_cache = tuple(float(mpf(v.mid)) for v in vals)
        return self._float_cache

    # -- frequency constructors -------------------------------------------

    def intern(self, coords: tuple[Fraction, ...]) -> "Frequency":
        """Canonical (shared) frequency object for a coordinate vector.

        Interned objects live as long as the basis, which makes identity
        keys safe for the pair-sum memo used by polynomial convolution.
        """
        f = self._freq_intern.get(coords)
        if f is None:
            f = Frequency(self, coords)
            f._interned = True
            self._freq_intern[coords] = f
        return f

    def frequency(self, spec) -> "Frequency":
        """Coerce ``spec`` to a frequency.

        Accepts a rational (multiple of the unit label), a mapping
        ``label -> rational`` or a full coordinate sequence.
        """
        if isinstance(spec, Frequency):
            if spec.basis is not self:
                raise BasisMismatchError("frequency from a different basis")
            return spec
        n = len(self.labels)
        if isinstance(spec, (int, Fraction, str)) or isinstance(spec, Rational):
            coords = [Fraction(0)] * n
            coords[0] = _as_fraction(spec)
            return self.intern(tuple(coords))
        if isinstance(spec, Mapping):
            coords = [Fraction(0)] * n
            for label, q in spec.items():
                coords[self.label_index(label)] = _as_fraction(q)
            return self.intern(tuple(coords))
        coords = [_as_fraction(q) for q in spec]
        if len(coords) != n:
            raise BasisError(f"expected {n} coordinates, got {len(coords)}")
        return self.intern(tuple(coords))

    def zero_frequency(self) -> "Frequency":
        return self.intern(tuple(Fraction(0) for _ in self.labels))


def _is_exact_one(value) -> bool:
    try:
        return not callable(value) and _as_fraction(value) == 1
    except (TypeError, ValueError):
        return False


def make_basis(entries: Sequence[tuple[str, BasisValue]],
               precision_ceiling: int = DEFAULT_PRECISION_CEILING) -> FrequencyBasis:
    """Validated basis constructor; inserts the unit label if missing."""
    return FrequencyBasis(entries, precision_ceiling=precision_ceiling)


class Frequency:
    """Exact rational coordinate vector over a shared basis; models a real
    frequency.  Immutable, hashable, usable as a dict key."""

    __slots__ = ("basis", "coords", "_hash", "_float", "_sign", "_interned")

    def __init__(self, basis: FrequencyBasis, coords: tuple[Fraction, ...]):
        self.basis = basis
        self.coords = coords
        self._hash = None
        self._float = None
        self._sign = None
        self._interned = False

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Frequency):
            return NotImplemented
        return self.basis is other.basis and self.coords == other.coords

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((id(self.basis), self.coords))
        return self._hash

    def __repr__(self) -> str:
        return f"Frequency({self.as_text()})"

    def as_text(self) -> str:
        parts = []
        for label, q in zip(self.basis.labels, self.coords):
            if q == 0:
                continue
            if label == self.basis.labels[0]:
                parts.append(str(q))
            elif q == 1:
                parts.append(label)
            else:
                parts.append(f"{q}*{label}")
        return " + ".join(parts) if parts else "0"

    # -- arithmetic (exact) -----------------------------------------------

    def _check_same_basis(self, other: "Frequency"):
        if self.basis is not other.basis:
            raise BasisMismatchError("frequencies over different bases")

    def __add__(self, other: "Frequency") -> "Frequency":
        self._check_same_basis(other)
        if self._interned and other._interned:
            memo = self.basis._sum_memo
            key = (id(self), id(other))
            hit = memo.get(key)
            if hit is not None:
                return hit
            out = self.basis.intern(
                tuple(a + b for a, b in zip(self.coords, other.coords)))
            memo[key] = out
            return out
        return self.basis.intern(
            tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Frequency") -> "Frequency":
        self._check_same_basis(other)
        return self.basis.intern(
            tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Frequency":
        return self.basis.intern(tuple(-a for a in self.coords))

    def scale(self, k) -> "Frequency":
        q = _as_fraction(k)
        return self.basis.intern(tuple(q * a for a in self.coords))

    # -- value --------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return all(q == 0 for q in self.coords)

    @property
    def is_rational(self) -> bool:
        """True when all coordinates on non-rational basis entries vanish."""
        return all(q == 0 or self.basis.is_exact(i)
                   for i, q in enumerate(self.coords))

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("frequency has irrational components")
        total = Fraction(0)
        for i, q in enumerate(self.coords):
            if q != 0:
                total += q * self.basis.exact_value(i)
        return total

    def value_interval(self, prec: int):
        """Rigorous enclosure of the real value at ``prec`` bits."""
        saved = iv.prec
        try:
            iv.prec = prec
            vals = self.basis.values_interval(prec)
            total = iv.mpf(0)
            for q, v in zip(self.coords, vals):
                if q != 0:
                    total += _fraction_to_interval(q) * v
        finally:
            iv.prec = saved
        return total

    def value_float(self) -> float:
        if self._float is None:
            if self.is_rational:
                self._float = float(self.rational_value())
            else:
                self._float = float(mpf(self.value_interval(64).mid))
        return self._float

    def sign(self) -> int:
        """Exact sign of the real value (-1, 0, +1)."""
        if self._sign is None:
            self._sign = frequency_compare(self, self.basis.zero_frequency())
        return self._sign


def frequency_compare(a: Frequency, b: Frequency) -> int:
    """Order two frequencies: -1, 0 or +1.

    Equality is decided exactly on coordinates.  Otherwise the enclosure of
    the difference is evaluated at doubling precision until it excludes 0;
    hitting the basis precision ceiling first raises
    :class:`UnresolvableComparisonError` (the declared basis values may be
    rationally dependent).
    """
    a._check_same_basis(b)
    if a.coords == b.coords:
        return 0
    diff = a - b
    if diff.is_rational:
        q = diff.rational_value()
        if q == 0:
            # distinct coordinates on rational labels cannot cancel to the
            # same value unless the declared rationals are dependent
            raise UnresolvableComparisonError(
                "distinct coordinates with equal rational value: "
                "basis entries are rationally dependent")
        return 1 if q > 0 else -1
    prec = MIN_COMPARE_PREC
    ceiling = a.basis.precision_ceiling
    while prec <= ceiling:
        enc = diff.value_interval(prec)
        if enc.a > 0:
            return 1
        if enc.b < 0:
            return -1
        prec *= 2
    raise UnresolvableComparisonError(
        f"cannot separate {a.as_text()} and {b.as_text()} below "
        f"{ceiling} bits; basis may be rationally dependent")


def sort_frequencies(freqs: Iterable[Frequency]) -> list[Frequency]:
    return sorted(freqs, key=cmp_to_key(frequency_compare))


Scalar = Union[int, float, complex, Fraction]


class APPolynomial:
    """Finite sum ``sum_j c_j * exp(i*lambda_j*x)`` with exact nonnegative
    frequencies and complex coefficients.

    Values are immutable; arithmetic returns fresh objects.  Zero
    coefficients are never stored, so the spectrum is exactly the key set
    of the term map.
    """

    __slots__ = ("basis", "_terms", "_spectrum_cache")

    def __init__(self, basis: FrequencyBasis, terms: Mapping[Frequency, complex],
                 _validated: bool = False):
        self.basis = basis
        if _validated:
            self._terms = dict(terms)
        else:
            clean: dict[Frequency, complex] = {}
            for freq, coeff in terms.items():
                if not isinstance(freq, Frequency):
                    freq = basis.frequency(freq)
                elif freq.basis is not basis:
                    raise BasisMismatchError("term frequency from another basis")
                c = complex(coeff)
                if c == 0:
                    continue
                if not freq.is_zero and freq.sign() < 0:
                    raise NegativeFrequencyError(
                        f"frequency {freq.as_text()} is negative")
                clean[freq] = clean.get(freq, 0j) + c
            self._terms = {f: c for f, c in clean.items() if c != 0}
        self._spectrum_cache = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, basis: FrequencyBasis) -> "APPolynomial":
        return cls(basis, {}, _validated=True)

    @classmethod
    def constant(cls, basis: FrequencyBasis, c: Scalar) -> "APPolynomial":
        c = complex(c)
        if c == 0:
            return cls.zero(basis)
        return cls(basis, {basis.zero_frequency(): c}, _validated=True)

    @classmethod
    def exponential(cls, basis: FrequencyBasis, freq, coeff: Scalar = 1) -> "APPolynomial":
        """The single character ``coeff * exp(i*freq*x)``."""
        return cls(basis, {basis.frequency(freq): complex(coeff)})

    @classmethod
    def from_dict(cls, basis: FrequencyBasis, terms: Mapping) -> "APPolynomial":
        return cls(basis, {basis.frequency(k): v for k, v in terms.items()})

    # -- container ----------------------------------------------------------

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, freq) -> complex:
        """Bohr--Fourier coefficient: the mean of ``a * exp(-i*freq*x)``,
        exact for polynomials (the stored coefficient, 0 if absent)."""
        return self._terms.get(self.basis.frequency(freq), 0j)

    @property
    def constant_coefficient(self) -> complex:
        return self._terms.get(self.basis.zero_frequency(), 0j)

    def spectrum(self) -> tuple[Frequency, ...]:
        """Frequencies with nonzero coefficient, sorted increasingly."""
        if self._spectrum_cache is None:
            self._spectrum_cache = tuple(sort_frequencies(self._terms))
        return self._spectrum_cache

    def l1_norm(self) -> float:
        """Coefficient-sum bound: dominates the sup norm on the line."""
        return float(sum(abs(c) for c in self._terms.values()))

    def min_positive_frequency(self) -> float | None:
        vals = [f.value_float() for f in self._terms if not f.is_zero]
        return min(vals) if vals else None

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "APPolynomial | None":
        if isinstance(other, APPolynomial):
            if other.basis is not self.basis:
                raise BasisMismatchError("polynomials over different bases")
            return other
        if isinstance(other, (int, float, complex, Fraction)):
            return APPolynomial.constant(self.basis, complex(other))
        return None

    def __add__(self, other) -> "APPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for f, c in other._terms.items():
            s = terms.get(f, 0j) + c
            if s == 0:
                terms.pop(f, None)
            else:
                terms[f] = s
        return APPolynomial(self.basis, terms, _validated=True)

    __radd__ = __add__

    def __neg__(self) -> "APPolynomial":
        return APPolynomial(self.basis, {f: -c for f, c in self._terms.items()},
                            _validated=True)

    def __sub__(self, other) -> "APPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "APPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "APPolynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        # convolution of coefficient maps: frequencies add
        out: dict[Frequency, complex] = {}
        for fa, ca in self._terms.items():
            for fb, cb in other._terms.items():
                f = fa + fb
                s = out.get(f, 0j) + ca * cb
                if s == 0:
                    out.pop(f, None)
                else:
                    out[f] = s
        return APPolynomial(self.basis, out, _validated=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "APPolynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = APPolynomial.constant(self.basis, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float, complex, Fraction)):
            other = APPolynomial.constant(self.basis, complex(other))
        if not isinstance(other, APPolynomial):
            return NotImplemented
        return self.basis is other.basis and self._terms == other._terms

    def __hash__(self):
        return hash((id(self.basis), frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if self.is_zero:
            return "APPolynomial(0)"
        parts = [f"({c:.6g})e[{f.as_text()}]" for f, c in list(self._terms.items())[:8]]
        more = " + ..." if len(self._terms) > 8 else ""
        return "APPolynomial(" + " + ".join(parts) + more + ")"

    # -- analysis -------------------------------------------------------------

    def eval_real(self, x) -> np.ndarray | complex:
        """Evaluate on the real line; ``x`` may be a float or an ndarray."""
        arr = np.asarray(x, dtype=float)
        out = np.zeros(arr.shape, dtype=complex)
        for f, c in self._terms.items():
            out += c * np.exp(1j * f.value_float() * arr)
        if np.isscalar(x) or arr.shape == ():
            return complex(out)
        return out

    def eval_upper(self, z: complex) -> complex:
        """Holomorphic extension at ``z`` in the closed upper half-plane."""
        z = complex(z)
        if z.imag < 0:
            raise HalfPlaneError(f"point {z} lies below the real axis")
        total = 0j
        for f, c in self._terms.items():
            lam = f.value_float()
            total += c * cmath.exp(1j * lam * z.real) * math.exp(-lam * z.imag)
        return total

    def contract(self, t: float) -> "APPolynomial":
        """Damp the coefficient at frequency ``lam`` by ``t**lam``.

        ``t=1`` is the identity; ``t=0`` projects onto the constant term
        (convention ``0**0 = 1``).  This is the contraction homotopy: on the
        half-plane it agrees with translating the argument up by
        ``log(1/t)``.
        """
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"contraction parameter {t} outside [0, 1]")
        if t == 1.0:
            return self
        if t == 0.0:
            c0 = self.constant_coefficient
            return APPolynomial.constant(self.basis, c0)
        terms = {f: c * (t ** f.value_float()) for f, c in self._terms.items()}
        return APPolynomial(self.basis, {f: c for f, c in terms.items() if c != 0},
                            _validated=True)

    def truncate_tail(self, mass_budget: float) -> tuple["APPolynomial", float]:
        """Drop the largest-frequency terms whose total coefficient mass
        stays within ``mass_budget``; returns (truncated, dropped_mass).

        Keeping the smallest frequencies first preserves the terms that
        dominate high on the half-plane.
        """
        if mass_budget <= 0 or not self._terms:
            return self, 0.0
        order = sorted(self._terms,
                       key=lambda f: (f.value_float(), f.coords), reverse=True)
        dropped = 0.0
        removed = []
        for f in order:
            c = abs(self._terms[f])
            if dropped + c > mass_budget:
                break
            dropped += c
            removed.append(f)
        if not removed:
            return self, 0.0
        terms = dict(self._terms)
        for f in removed:
            del terms[f]
        return APPolynomial(self.basis, terms, _validated=True), dropped


def contract(a: APPolynomial, t: float) -> APPolynomial:
    """Module-level alias for :meth:`APPolynomial.contract`."""
    return a.contract(t)


# -- sup bounds ---------------------------------------------------------------

@dataclass(frozen=True)
class RealGrid:
    """Uniform sample grid on the real line."""

    start: float = -200.0
    stop: float = 200.0
    step: float = 0.05

    def __post_init__(self):
        if self.step <= 0 or self.stop < self.start:
            raise ValueError("bad grid")

    def points(self) -> np.ndarray:
        n = int(math.floor((self.stop - self.start) / self.step)) + 1
        return self.start + self.step * np.arange(n)


@dataclass(frozen=True)
class SupBounds:
    lower: float
    upper: float


def sup_bounds(a: APPolynomial, grid: RealGrid | None = None) -> SupBounds:
    """Two-sided bracket of ``sup_R |a|`` (equal to the sup over the closed
    upper half-plane).

    ``upper`` is the coefficient-sum bound; ``lower`` the largest sampled
    ``|a(x)|``.  The sup itself is generally not computable exactly for
    incommensurable spectra, so consumers must pick a side.
    """
    upper = a.l1_norm()
    if a.is_zero:
        return SupBounds(0.0, 0.0)
    grid = grid or RealGrid()
    values = np.abs(a.eval_real(grid.points()))
    return SupBounds(float(values.max()), upper)


# -- numeric Bohr mean ---------------------------------------------------------

@dataclass(frozen=True)
class BohrMeanResult:
    value: complex
    error_estimate: float
    n_samples: int


def bohr_mean_numeric(f, lam: float, half_width: float,
                      step: float = 0.01) -> BohrMeanResult:
    """Trapezoid approximation of the Bohr mean
    ``(1/2N) * integral_{-N}^{N} f(x) exp(-i*lam*x) dx`` with ``N = half_width``.

    ``f`` may be an :class:`APPolynomial`, a vectorized callable on ndarrays,
    or a plain scalar callable.  The reported error combines the trapezoid
    quadrature term with a truncation estimate: rigorous
    ``sum_{mu != lam} |c_mu| * min(1, 1/(|mu-lam|*N))`` for polynomials, the
    O(1/N) heuristic ``max|f|/N`` otherwise.
    """
    if half_width <= 0 or step <= 0:
        raise ValueError("half_width and step must be positive")
    n = int(math.ceil(2 * half_width / step))
    x = np.linspace(-half_width, half_width, n + 1)
    h = x[1] - x[0]
    if isinstance(f, APPolynomial):
        fx = f.eval_real(x)
    elif callable(f):
        try:
            fx = np.asarray(f(x), dtype=complex)
            if fx.shape != x.shape:
                raise ValueError
        except Exception:
            fx = np.array([f(xi) for xi in x], dtype=complex)
    else:
        fx = np.asarray(f, dtype=complex)
        if fx.shape != x.shape:
            raise ValueError("sample array must match the grid size")
    if not np.all(np.isfinite(fx.real)) or not np.all(np.isfinite(fx.imag)):
        raise ValueError("non-finite samples")
    integrand = fx * np.exp(-1j * lam * x)
    value = complex(np.trapezoid(integrand, dx=h) / (2 * half_width))
    # quadrature: |f''| estimated from second differences
    d2 = np.abs(np.diff(integrand, n=2))
    quad_err = float(h * np.sum(d2) / (12 * 2 * half_width)) if d2.size else 0.0
    peak = float(np.max(np.abs(integrand)))
    # accumulated rounding across the sample sum (random-walk model)
    noise = 16 * np.finfo(float).eps * math.sqrt(n + 1) * peak
    if isinstance(f, APPolynomial):
        trunc = 0.0
        for freq, c in f.items():
            gap = abs(freq.value_float() - lam)
            if gap * half_width > 1e-12:
                trunc += abs(c) * min(1.0, 1.0 / (gap * half_width))
        trunc_err = trunc
    else:
        trunc_err = float(np.max(np.abs(fx))) / half_width
    return BohrMeanResult(value, quad_err + trunc_err + noise, n + 1)
