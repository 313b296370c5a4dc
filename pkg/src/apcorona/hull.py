"""Finite coordinate model of the polynomial hull of the embedded half-plane.

The ambient space assigns a complex number to every semigroup frequency; a
point of the hull is dominated, on every polynomial in the coordinate
functionals, by the sup of that polynomial over the embedded half-plane.
The model materializes finitely many *tracked* coordinates (each certified
to lie in the semigroup), the integer lattice of additive relations among
them, and a semi-decision membership test: a rejection is sound and comes
with an explicit witness polynomial, while "no witness found" proves
nothing.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import APPolynomial, Frequency, sort_frequencies
from .errors import HalfPlaneError, SemigroupError, UntrackedCoordinateError
from .semigroup import Semigroup


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def integer_kernel(columns: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of the integer kernel lattice of the matrix with the given
    columns, via unimodular column reduction."""
    n = len(columns)
    if n == 0:
        return []
    m = len(columns[0])
    A = [list(col) for col in columns]
    U = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    lead = 0
    for r in range(m):
        piv = next((j for j in range(lead, n) if A[j][r] != 0), None)
        if piv is None:
            continue
        A[lead], A[piv] = A[piv], A[lead]
        U[lead], U[piv] = U[piv], U[lead]
        for j in range(lead + 1, n):
            while A[j][r] != 0:
                a, b = A[lead][r], A[j][r]
                x, y, g = _xgcd(a, b)
                p, q = -(b // g), a // g
                A[lead], A[j] = (
                    [x * u + y * v for u, v in zip(A[lead], A[j])],
                    [p * u + q * v for u, v in zip(A[lead], A[j])],
                )
                U[lead], U[j] = (
                    [x * u + y * v for u, v in zip(U[lead], U[j])],
                    [p * u + q * v for u, v in zip(U[lead], U[j])],
                )
        lead += 1
    kernel = []
    for j in range(lead, n):
        vec = U[j]
        g = 0
        for v in vec:
            g = math.gcd(g, abs(v))
        if g > 1:
            vec = [v // g for v in vec]
        first = next((v for v in vec if v != 0), 0)
        if first < 0:
            vec = [-v for v in vec]
        kernel.append(tuple(vec))
    kernel.sort()
    return kernel


class CoordinateModel:
    """A finite tracked subset of the semigroup, with membership
    certificates and the lattice of additive relations among the tracked
    frequencies."""

    def __init__(self, sg: Semigroup, tracked: Iterable[Frequency] = ()):
        self.semigroup = sg
        self.basis = sg.basis
        freqs: list[Frequency] = list(sg.generators)
        for f in tracked:
            ff = self.basis.frequency(f)
            if ff not in freqs and not ff.is_zero:
                freqs.append(ff)
        self.tracked: tuple[Frequency, ...] = tuple(sort_frequencies(freqs))
        self.certificates = {}
        for f in self.tracked:
            cert = sg.membership(f)
            if not cert.is_member:
                raise SemigroupError(
                    f"tracked frequency {f.as_text()} is not in the semigroup")
            self.certificates[f] = cert
        self._index = {f: i for i, f in enumerate(self.tracked)}

    def index(self, freq) -> int:
        f = self.basis.frequency(freq)
        try:
            return self._index[f]
        except KeyError:
            raise UntrackedCoordinateError(
                f"coordinate {f.as_text()} is not tracked") from None

    def relation_lattice(self) -> list[tuple[int, ...]]:
        """Integer vectors r with ``sum_j r_j * tracked_j == 0`` exactly;
        each encodes a pair of coinciding monomials (a binomial relation)."""
        denom = 1
        for f in self.tracked:
            for q in f.coords:
                denom = denom * q.denominator // math.gcd(denom, q.denominator)
        cols = [[int(q * denom) for q in f.coords] for f in self.tracked]
        return integer_kernel(cols)


@dataclass(frozen=True)
class HullPoint:
    """Candidate hull point: a complex value per tracked coordinate.

    Genuine hull members satisfy |value| <= 1 on every coordinate and are
    multiplicative on certified frequency sums; violators are constructible
    on purpose, so the membership test can reject them with a witness.
    """

    model: CoordinateModel
    assignment: Mapping[Frequency, complex]

    def value(self, freq) -> complex:
        f = self.model.basis.frequency(freq)
        if f.is_zero:
            return 1.0 + 0j
        try:
            return complex(self.assignment[f])
        except KeyError:
            raise UntrackedCoordinateError(
                f"point has no value at {f.as_text()}") from None

    def necessary_violations(self, tol: float = 1e-10) -> list[str]:
        """Cheap necessary-condition scan (unit bound, multiplicativity on
        tracked sums); the membership test subsumes it with witnesses."""
        bad = []
        for f in self.model.tracked:
            if abs(self.value(f)) > 1 + tol:
                bad.append(f"|v[{f.as_text()}]| > 1")
        tracked = set(self.model.tracked)
        for a, b in itertools.combinations_with_replacement(self.model.tracked, 2):
            s = a + b
            if s in tracked:
                if abs(self.value(s) - self.value(a) * self.value(b)) > tol:
                    bad.append(f"v[{s.as_text()}] != v[{a.as_text()}]*v[{b.as_text()}]")
        return bad


def embed_point(model: CoordinateModel, z: complex) -> HullPoint:
    """Evaluation point of the upper half-plane: coordinate ``lam`` takes
    the value ``exp(i*lam*z)``."""
    z = complex(z)
    if z.imag < 0:
        raise HalfPlaneError(f"{z} lies below the real axis")
    assignment = {f: cmath.exp(1j * f.value_float() * z) for f in model.tracked}
    return HullPoint(model, assignment)


def contract_point(v: HullPoint, t: float) -> HullPoint:
    """Damp coordinate ``lam`` by ``t**lam`` (0**0 = 1); embedded points
    slide up the half-plane by ``log(1/t)``."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"contraction parameter {t} outside [0, 1]")
    if t == 1.0:
        return v
    assignment = {}
    for f, val in v.assignment.items():
        lam = f.value_float()
        if t == 0.0:
            assignment[f] = complex(val) if lam == 0.0 else 0j
        else:
            assignment[f] = complex(val) * (t ** lam)
    return HullPoint(v.model, assignment)


class CoordinatePolynomial:
    """Polynomial in the tracked coordinate functionals.

    Terms map an exponent tuple (one entry per tracked coordinate) to a
    complex coefficient.  The pullback along the half-plane embedding
    replaces each monomial by the character at the weighted frequency sum,
    so coinciding monomials merge; the coefficient-sum bound of the
    pullback dominates the sup of the polynomial over the embedded
    half-plane.
    """

    def __init__(self, model: CoordinateModel,
                 terms: Mapping[tuple[int, ...], complex]):
        self.model = model
        n = len(model.tracked)
        clean: dict[tuple[int, ...], complex] = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps}")
            c = complex(coeff)
            if c != 0:
                clean[exps] = clean.get(exps, 0j) + c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    @classmethod
    def variable(cls, model: CoordinateModel, freq) -> "CoordinatePolynomial":
        i = model.index(freq)
        exps = tuple(1 if j == i else 0 for j in range(len(model.tracked)))
        return cls(model, {exps: 1.0})

    @classmethod
    def monomial(cls, model: CoordinateModel, exps: Sequence[int],
                 coeff: complex = 1.0) -> "CoordinatePolynomial":
        return cls(model, {tuple(exps): coeff})

    @classmethod
    def binomial_from_relation(cls, model: CoordinateModel,
                               relation: Sequence[int]) -> "CoordinatePolynomial":
        """``z^{r+} - z^{r-}`` for a lattice relation r; pulls back to the
        zero polynomial, so any nonzero value at a point is a witness."""
        pos = tuple(max(r, 0) for r in relation)
        neg = tuple(max(-r, 0) for r in relation)
        return cls(model, {pos: 1.0, neg: -1.0})

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def evaluate(self, v: HullPoint) -> complex:
        if v.model is not self.model:
            raise ValueError("point from a different model")
        total = 0j
        for exps, c in self.terms.items():
            prod = c
            for f, e in zip(self.model.tracked, exps):
                if e:
                    prod *= v.value(f) ** e
            total += prod
        return total

    def pullback(self) -> APPolynomial:
        basis = self.model.basis
        terms: dict[Frequency, complex] = {}
        for exps, c in self.terms.items():
            freq = basis.zero_frequency()
            for f, e in zip(self.model.tracked, exps):
                if e:
                    freq = freq + f.scale(e)
            terms[freq] = terms.get(freq, 0j) + c
        return APPolynomial(basis, terms)

    def substitute_contraction(self, t: float) -> "CoordinatePolynomial":
        """Precompose with the coordinate damping ``z_lam -> t**lam * z_lam``."""
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"contraction parameter {t} outside [0, 1]")
        out = {}
        for exps, c in self.terms.items():
            w = sum(e * f.value_float() for f, e in zip(self.model.tracked, exps))
            out[exps] = c * (t ** w if w else 1.0)
        return CoordinatePolynomial(self.model, out)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[exps]
            mono = "*".join(
                f"z[{f.as_text()}]" + (f"^{e}" if e > 1 else "")
                for f, e in zip(self.model.tracked, exps) if e) or "1"
            parts.append(f"({c:.6g})*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CoordinatePolynomial({self.render()})"


def default_test_family(model: CoordinateModel, max_degree: int = 3) -> list[CoordinatePolynomial]:
    """All monomials up to the given total degree (low degree first, so a
    unit-bound violation is witnessed by the bare coordinate), then one
    binomial per relation-lattice basis vector."""
    n = len(model.tracked)
    polys: list[CoordinatePolynomial] = []
    for deg in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), deg):
            exps = [0] * n
            for i in combo:
                exps[i] += 1
            polys.append(CoordinatePolynomial.monomial(model, exps))
    for rel in model.relation_lattice():
        polys.append(CoordinatePolynomial.binomial_from_relation(model, rel))
    return polys


@dataclass(frozen=True)
class HullTestResult:
    rejected: bool
    witness: CoordinatePolynomial | None = None
    witness_value: float = 0.0
    witness_bound: float = 0.0
    tested: int = 0

    @property
    def status(self) -> str:
        return "rejected-with-witness" if self.rejected else "no-witness-found"


def hull_membership_test(v: HullPoint,
                         test_polys: Sequence[CoordinatePolynomial] | None = None,
                         margin: float = 1e-8) -> HullTestResult:
    """Semi-decision for hull membership.

    A point is rejected as soon as some test polynomial exceeds the
    coefficient-sum bound of its half-plane pullback (a sound upper bound
    for the sup over the embedded half-plane, so rejections are
    conservative).  Passing every test proves nothing.
    """
    polys = default_test_family(v.model) if test_polys is None else list(test_polys)
    for p in polys:
        value = abs(p.evaluate(v))
        bound = p.pullback().l1_norm()
        if value > bound + margin:
            return HullTestResult(True, p, value, bound, len(polys))
    return HullTestResult(False, None, 0.0, 0.0, len(polys))
