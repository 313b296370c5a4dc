"""Finitely generated additive semigroups in [0, inf) containing 0.

Membership always produces a *certificate*: either an explicit multiplicity
vector over the generators that recombines exactly to the target, or a
refusal backed by an exhaustive search bound.  When every generator is
rational the semigroup is rescaled to a numerical semigroup of integers and
membership is decided in O(1) from the Apery set (computed once by a
shortest-path sweep over residues).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .algebra import APPolynomial, Frequency, FrequencyBasis, sort_frequencies
from .errors import (
    IrrationalGeneratorError,
    NegativeFrequencyError,
    SemigroupError,
)


@dataclass(frozen=True)
class MembershipCertificate:
    """Witness for ``target in sigma`` (combo) or a definitive refusal.

    ``combo`` maps generator index -> nonnegative multiplicity and satisfies
    ``sum_i combo[i] * generator_i == target`` exactly in frequency
    arithmetic.  ``search_bound`` documents the exhausted search space when
    the certificate is a refusal.
    """

    target: Frequency
    combo: dict[int, int] | None
    search_bound: str = ""

    @property
    def is_member(self) -> bool:
        return self.combo is not None

    def verify(self, generators: Sequence[Frequency]) -> bool:
        if self.combo is None:
            return True
        total = self.target.basis.zero_frequency()
        for i, k in self.combo.items():
            if k < 0:
                return False
            total = total + generators[i].scale(k)
        return total == self.target


@dataclass(frozen=True)
class FrobeniusData:
    """Scaled-integer picture of a commensurable semigroup.

    Generators times ``common_denominator`` are integers; dividing by their
    ``gcd`` leaves coprime integers.  ``frobenius`` is the largest integer
    not representable by those (-1 if all are), ``apery[r]`` the least
    representable integer congruent to ``r`` modulo the smallest generator.
    """

    common_denominator: int
    gcd: int
    scaled_generators: tuple[int, ...]
    frobenius: int
    apery: tuple[int, ...]


@dataclass(frozen=True)
class SaturationResult:
    status: str  # "saturated" | "witness" | "inconclusive"
    witness: Frequency | None = None
    searched_bound: float = 0.0


@dataclass(frozen=True)
class SpectrumValidation:
    contained: bool
    violation: Frequency | None = None


class Semigroup:
    """Additive semigroup generated by finitely many positive frequencies
    (0 belongs by convention, as the empty combination)."""

    def __init__(self, generators: Sequence[Frequency], basis: FrequencyBasis | None = None):
        gens = list(generators)
        if not gens:
            raise SemigroupError("at least one generator required")
        self.basis = basis or gens[0].basis
        for g in gens:
            if g.basis is not self.basis:
                raise SemigroupError("generators over different bases")
            if g.sign() <= 0:
                raise NegativeFrequencyError(
                    f"generator {g.as_text()} is not strictly positive")
        if len({g.coords for g in gens}) != len(gens):
            raise SemigroupError("generators must be pairwise distinct")
        self.generators: tuple[Frequency, ...] = tuple(sort_frequencies(gens))
        self._element_heap_cache: list[tuple[Frequency, dict[int, int]]] = []

    @classmethod
    def from_values(cls, basis: FrequencyBasis, specs: Iterable) -> "Semigroup":
        return cls([basis.frequency(s) for s in specs], basis)

    def __repr__(self) -> str:
        return "Semigroup<" + ", ".join(g.as_text() for g in self.generators) + ">"

    @property
    def is_rational(self) -> bool:
        return all(g.is_rational for g in self.generators)

    # -- scaled integer model ------------------------------------------------

    @cached_property
    def integer_model(self) -> FrobeniusData:
        if not self.is_rational:
            raise IrrationalGeneratorError(
                "integer model requires rational generators")
        values = [g.rational_value() for g in self.generators]
        denom = 1
        for v in values:
            denom = denom * v.denominator // math.gcd(denom, v.denominator)
        ints = [int(v * denom) for v in values]
        g = 0
        for n in ints:
            g = math.gcd(g, n)
        reduced = tuple(sorted(n // g for n in ints))
        apery = _apery_set(reduced)
        frob = max(apery) - reduced[0]
        return FrobeniusData(denom, g, tuple(ints), frob, apery)

    # -- membership ------------------------------------------------------------

    def membership(self, target: Frequency) -> MembershipCertificate:
        """Decide ``target in sigma`` with an exact witness or a definitive
        refusal.  Rational case: Apery lookup.  General case: exhaustive
        search over multiplicities ``k_i <= value(target)/value(g_i)``."""
        if target.basis is not self.basis:
            raise SemigroupError("target frequency over a different basis")
        sgn = target.sign()
        if sgn < 0:
            raise NegativeFrequencyError("membership target must be >= 0")
        if sgn == 0:
            return MembershipCertificate(target, {})
        if self.is_rational and target.is_rational:
            return self._membership_rational(target)
        return self._membership_search(target)

    def _membership_rational(self, target: Frequency) -> MembershipCertificate:
        model = self.integer_model
        t = target.rational_value() * model.common_denominator
        bound = f"apery lookup mod {model.scaled_generators}"
        if t.denominator != 1:
            return MembershipCertificate(target, None, bound)
        t = int(t)
        if t % model.gcd != 0:
            return MembershipCertificate(target, None, bound)
        tr = t // model.gcd
        reduced = sorted(n // model.gcd for n in model.scaled_generators)
        if not _apery_member(tr, reduced, model.apery):
            return MembershipCertificate(target, None, bound)
        # descend to an explicit combo, largest generator first
        order = sorted(range(len(self.generators)),
                       key=lambda i: -(self.generators[i].rational_value()))
        scaled = [int(self.generators[i].rational_value() * model.common_denominator)
                  // model.gcd for i in range(len(self.generators))]
        combo: dict[int, int] = {}
        rem = tr
        while rem > 0:
            for i in order:
                s = scaled[i]
                if rem >= s and _apery_member(rem - s, reduced, model.apery):
                    combo[i] = combo.get(i, 0) + 1
                    rem -= s
                    break
            else:  # pragma: no cover - apery decision guarantees progress
                raise SemigroupError("apery descent failed")
        return MembershipCertificate(target, combo, bound)

    def _membership_search(self, target: Frequency) -> MembershipCertificate:
        # depth-first over multiplicity vectors; generators descending by
        # value so the smallest generator varies fastest (deterministic
        # certificates).  Multiplicity caps come from rigorous upper/lower
        # value enclosures, so a refusal is exhaustive.
        order = sorted(range(len(self.generators)),
                       key=lambda i: -self.generators[i].value_float())
        gens = [self.generators[i] for i in order]
        caps = []
        tgt_hi = float(target.value_interval(64).b)
        for g in gens:
            lo = float(g.value_interval(64).a)
            caps.append(int(math.floor(tgt_hi / lo + 1e-12)))
        bound = "exhaustive k_i <= " + ",".join(str(c) for c in caps)
        ks = [0] * len(gens)

        def descend(level: int, remaining: Frequency) -> bool:
            if remaining.is_zero:
                for j in range(level, len(gens)):
                    ks[j] = 0
                return True
            if level == len(gens) or remaining.sign() < 0:
                return False
            g = gens[level]
            if level == len(gens) - 1:
                k = _exact_multiple(remaining, g)
                if k is not None and k <= caps[level]:
                    ks[level] = k
                    return True
                return False
            rem = remaining
            for k in range(caps[level] + 1):
                if not rem.is_zero and rem.sign() < 0:
                    break
                if descend(level + 1, rem):
                    ks[level] = k
                    return True
                rem = rem - g
            return False

        if descend(0, target):
            combo = {order[i]: k for i, k in enumerate(ks) if k}
            return MembershipCertificate(target, combo, bound)
        return MembershipCertificate(target, None, bound)

    # -- saturation --------------------------------------------------------------

    def saturation_check(self, search_bound: float | None = None) -> SaturationResult:
        """Does sigma equal the nonnegative part of the group it generates?

        Commensurable generators: decided exactly (sigma saturates iff the
        gcd element itself belongs).  Otherwise group elements are
        enumerated in shells of growing coefficient size and tested for
        membership; the first shell containing a non-member yields its
        smallest one as witness.  Finding no witness is *inconclusive*.
        """
        if search_bound is None:
            search_bound = 10.0 * max(g.value_float() for g in self.generators)
        if search_bound <= 0:
            raise SemigroupError("search bound must be positive")
        if self.is_rational:
            model = self.integer_model
            reduced = [n // model.gcd for n in model.scaled_generators]
            d = Fraction(model.gcd, model.common_denominator)
            if min(reduced) == 1:
                return SaturationResult("saturated", None, search_bound)
            witness = self.basis.frequency(d)
            return SaturationResult("witness", witness, search_bound)
        return self._saturation_shells(search_bound)

    def _saturation_shells(self, search_bound: float) -> SaturationResult:
        gens = self.generators
        r = len(gens)
        min_val = min(g.value_float() for g in gens)
        max_shell = max(1, int(math.floor(search_bound / min_val)) + 1)
        zero = self.basis.zero_frequency()
        for shell in range(1, max_shell + 1):
            candidates: list[tuple[float, tuple, Frequency]] = []
            for vec in _shell_vectors(r, shell):
                freq = zero
                for k, g in zip(vec, gens):
                    if k:
                        freq = freq + g.scale(k)
                val = freq.value_float()
                if val < -1e-15 or val > search_bound or freq.is_zero:
                    continue
                if freq.sign() < 0:
                    continue
                candidates.append((val, freq.coords, freq))
            candidates.sort(key=lambda t: (t[0], t[1]))
            for _, _, freq in candidates:
                if not self.membership(freq).is_member:
                    return SaturationResult("witness", freq, search_bound)
        return SaturationResult("inconclusive", None, search_bound)

    # -- enumeration ----------------------------------------------------------------

    def smallest_elements(self, count: int) -> list[tuple[Frequency, dict[int, int]]]:
        """The ``count`` smallest semigroup elements (0 first), each with a
        membership combo.  Cached; grows on demand."""
        cache = self._element_heap_cache
        if len(cache) >= count:
            return cache[:count]
        seen: dict[Frequency, dict[int, int]] = {f: c for f, c in cache}
        if not cache:
            zero = self.basis.zero_frequency()
            seen[zero] = {}
            cache.append((zero, {}))
        # rebuild the frontier from the cached prefix
        frontier: dict[Frequency, dict[int, int]] = {}
        for f, combo in cache:
            for i, g in enumerate(self.generators):
                nxt = f + g
                if nxt not in seen:
                    c = dict(combo)
                    c[i] = c.get(i, 0) + 1
                    frontier[nxt] = c
        heap = [(f.value_float(), f.coords, tuple(sorted(c.items())), f)
                for f, c in frontier.items()]
        heapq.heapify(heap)
        while heap and len(cache) < count:
            _, _, combo_items, f = heapq.heappop(heap)
            if f in seen:
                continue
            combo = dict(combo_items)
            seen[f] = combo
            cache.append((f, combo))
            for i, g in enumerate(self.generators):
                nxt = f + g
                if nxt not in seen:
                    c = dict(combo)
                    c[i] = c.get(i, 0) + 1
                    heapq.heappush(
                        heap,
                        (nxt.value_float(), nxt.coords, tuple(sorted(c.items())), nxt))
        return cache[:count]

    # -- polynomial containment ---------------------------------------------------

    def validate_spectrum(self, a: APPolynomial) -> SpectrumValidation:
        """Check every spectrum frequency of ``a`` for membership; report
        the first violation in increasing frequency order."""
        if a.basis is not self.basis:
            raise SemigroupError("polynomial over a different basis")
        for freq in a.spectrum():
            if not self.membership(freq).is_member:
                return SpectrumValidation(False, freq)
        return SpectrumValidation(True, None)


def _shell_vectors(r: int, shell: int):
    """Integer vectors in Z^r with max-norm exactly ``shell``."""
    ranges = range(-shell, shell + 1)

    def rec(prefix: list[int], saturated: bool):
        if len(prefix) == r:
            if saturated:
                yield tuple(prefix)
            return
        for k in ranges:
            yield from rec(prefix + [k], saturated or abs(k) == shell)

    yield from rec([], False)


def _exact_multiple(target: Frequency, g: Frequency) -> int | None:
    """Integer k >= 0 with target == k*g, or None."""
    k = None
    for a, b in zip(target.coords, g.coords):
        if b == 0:
            if a != 0:
                return None
            continue
        q = a / b
        if k is None:
            k = q
        elif q != k:
            return None
    if k is None:
        return 0 if target.is_zero else None
    if k.denominator != 1 or k < 0:
        return None
    return int(k)


def _apery_set(reduced: Sequence[int]) -> tuple[int, ...]:
    """Least semigroup element in each residue class modulo the smallest
    generator, by Dijkstra over the residue graph."""
    m = reduced[0]
    dist = [None] * m
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if dist[r] is not None and d > dist[r]:
            continue
        for n in reduced:
            nd, nr = d + n, (r + n) % m
            if dist[nr] is None or nd < dist[nr]:
                dist[nr] = nd
                heapq.heappush(heap, (nd, nr))
    return tuple(dist)


def _apery_member(t: int, reduced: Sequence[int], apery: Sequence[int]) -> bool:
    if t < 0:
        return False
    return t >= apery[t % reduced[0]]


def enumerate_representable(generators: Sequence[int], limit: int) -> list[bool]:
    """Dynamic-programming oracle: ``out[t]`` iff ``t`` is a nonnegative
    integer combination of ``generators``.  Independent of the Apery path;
    used for cross-checking."""
    out = [False] * (limit + 1)
    out[0] = True
    for t in range(1, limit + 1):
        for g in generators:
            if g <= t and out[t - g]:
                out[t] = True
                break
    return out
